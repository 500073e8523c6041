#pragma once
// Independent reference computations for the test suites. Nothing here calls
// into the library except for data containers.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

// psi weights of 1 / (1 - a_1 z - ... - a_p z^p) by the defining recursion.
inline std::vector<double> psi_weights(const std::vector<double>& a, std::size_t n) {
  std::vector<double> psi(n, 0.0);
  psi[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 1; i <= a.size() && i <= j; ++i) psi[j] += a[i - 1] * psi[j - i];
  }
  return psi;
}

// Theoretical autocorrelations of a causal AR from its MA(infinity) weights.
inline std::vector<double> ar_acf(const std::vector<double>& a, int max_lag, std::size_t terms = 20000) {
  const auto psi = psi_weights(a, terms + static_cast<std::size_t>(max_lag));
  std::vector<double> g(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (int k = 0; k <= max_lag; ++k) {
    for (std::size_t j = 0; j < terms; ++j) g[static_cast<std::size_t>(k)] += psi[j] * psi[j + static_cast<std::size_t>(k)];
  }
  for (int k = max_lag; k >= 0; --k) g[static_cast<std::size_t>(k)] /= g[0];
  return g;
}

// Coefficients (lowest degree first) of prod (1 - alpha_i z).
inline std::vector<double> poly_from_inverse_roots(const std::vector<std::complex<double>>& alpha) {
  std::vector<std::complex<double>> c{1.0};
  for (auto a : alpha) {
    std::vector<std::complex<double>> n(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      n[i] += c[i];
      n[i + 1] -= a * c[i];
    }
    c = n;
  }
  std::vector<double> out;
  for (auto z : c) out.push_back(z.real());
  return out;
}

// AR coefficients a_j from 1 - sum a_j z^j.
inline std::vector<double> ar_from_poly(const std::vector<double>& c) {
  std::vector<double> a;
  for (std::size_t i = 1; i < c.size(); ++i) a.push_back(-c[i]);
  return a;
}

inline double sample_acf(const std::vector<double>& y, int k) {
  double m = 0.0;
  for (double v : y) m += v;
  m /= static_cast<double>(y.size());
  double c0 = 0.0, ck = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    c0 += (y[t] - m) * (y[t] - m);
    if (t >= static_cast<std::size_t>(k)) ck += (y[t] - m) * (y[t - static_cast<std::size_t>(k)] - m);
  }
  return ck / c0;
}

// Closed-form t(3) CDF.
inline double t3_cdf(double x) {
  const double s = std::sqrt(3.0);
  return 0.5 + (x / (s * (1.0 + x * x / 3.0)) + std::atan(x / s)) / M_PI;
}

template <class F>
double bisect(F&& f, double lo, double hi, double target) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
