#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "smar/error.hpp"
#include "smar/partial_fraction.hpp"
#include "smar/polynomial.hpp"
#include "smar/roots.hpp"

namespace smar {

/// Step-down (Schur-Cohn) test: true iff 1 - a_1 z - ... - a_p z^p has all
/// roots strictly outside the unit circle. Cheap enough for objective
/// evaluations; no root finding.
inline bool is_stationary_ar(std::span<const double> a) {
  std::vector<double> cur(a.begin(), a.end());
  while (!cur.empty() && cur.back() == 0.0) cur.pop_back();
  for (std::size_t p = cur.size(); p > 0; --p) {
    const double k = cur[p - 1];
    if (!std::isfinite(k) || std::abs(k) >= 1.0) return false;
    const double den = 1.0 - k * k;
    std::vector<double> next(p - 1);
    for (std::size_t j = 0; j + 1 < p; ++j) next[j] = (cur[j] + k * cur[p - 2 - j]) / den;
    cur = std::move(next);
  }
  return true;
}

/// Smallest root modulus of 1 - sum a_j z^j (infinity for the constant
/// polynomial).
inline double min_root_modulus(std::span<const double> a) {
  const auto p = Polynomial::from_ar(a);
  if (p.degree() == 0) return std::numeric_limits<double>::infinity();
  const auto rs = poly_roots(p);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : rs.entries) m = std::min(m, std::abs(e.root));
  return m;
}

/// phi(L) varphi(L^{-1}) (y_t - intercept) = eps_t with
/// phi(L) = 1 - phi_1 L - ... and varphi(L^{-1}) = 1 - varphi_1 L^{-1} - ...
struct MarModel {
  std::vector<double> phi;     // causal, r entries
  std::vector<double> varphi;  // noncausal, q entries
  double intercept = 0.0;

  int r() const noexcept { return static_cast<int>(phi.size()); }
  int q() const noexcept { return static_cast<int>(varphi.size()); }

  Polynomial causal_polynomial() const { return Polynomial::from_ar(phi); }
  /// The noncausal polynomial in the lead variable.
  Polynomial noncausal_polynomial() const { return Polynomial::from_ar(varphi); }

  bool is_stationary() const { return is_stationary_ar(phi) && is_stationary_ar(varphi); }

  void require_stationary() const {
    if (!is_stationary_ar(phi)) throw NonStationary("causal polynomial is not stationary");
    if (!is_stationary_ar(varphi)) throw NonStationary("noncausal polynomial is not stationary");
  }

  /// Largest inverse-root modulus over both polynomials (0 for MAR(0,0)).
  double max_inverse_modulus() const {
    double m = 0.0;
    for (const auto* side : {&phi, &varphi}) {
      const auto p = Polynomial::from_ar(*side);
      if (p.degree() > 0) m = std::max(m, poly_roots(p).max_modulus());
    }
    return m;
  }
};

namespace detail {

// psi_j of 1/(1 - a_1 z - ... - a_p z^p) for j = 0..n-1.
inline std::vector<double> ar_inverse_series(std::span<const double> a, std::size_t n) {
  std::vector<double> psi(n, 0.0);
  if (n == 0) return psi;
  psi[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 1; i <= a.size() && i <= j; ++i) s += a[i - 1] * psi[j - i];
    psi[j] = s;
  }
  return psi;
}

}  // namespace detail

/// Two-sided MA(infinity) coefficients xi_j, j in [j_min, j_max] (positive j
/// are leads), by convolving the one-sided inverse series of both
/// polynomials. Truncation error is below 1e-16 relative.
inline TwoSidedSeries two_sided_ma(const MarModel& model, int j_min, int j_max) {
  if (j_min > 0 || j_max < 0) throw InvalidArgument("two_sided_ma window must contain 0");
  model.require_stationary();
  const double rho = model.max_inverse_modulus();
  std::size_t tail = 1;
  if (rho > 0.0) tail = static_cast<std::size_t>(std::ceil(std::log(1e-17) / std::log(rho))) + 16;
  const std::size_t n = static_cast<std::size_t>(std::max(-j_min, j_max)) + tail;
  // Repeated roots gain a polynomial factor; the margin above covers
  // multiplicity two for moduli well below one.
  const auto psi = detail::ar_inverse_series(model.phi, model.r() > 0 ? n : 1);
  const auto chi = detail::ar_inverse_series(model.varphi, model.q() > 0 ? n : 1);
  TwoSidedSeries out;
  out.j_min = j_min;
  out.coeffs.assign(static_cast<std::size_t>(j_max - j_min + 1), 0.0);
  // xi_k = sum_j psi_j chi_{j+k}
  for (int k = j_min; k <= j_max; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
      const long i = static_cast<long>(j) + k;
      if (i < 0) continue;
      if (static_cast<std::size_t>(i) >= chi.size()) break;
      s += psi[j] * chi[static_cast<std::size_t>(i)];
    }
    out.coeffs[static_cast<std::size_t>(k - j_min)] = s;
  }
  return out;
}

/// Multiplicative seasonal MAR: phi(L) Phi(L^S) varphi(L^{-1}) Psi(L^{-S}).
struct SmarSpec {
  int season = 2;
  std::vector<double> phi;     // r
  std::vector<double> varphi;  // q
  std::vector<double> Phi;     // R
  std::vector<double> Psi;     // Q
  double intercept = 0.0;
};

inline MarModel expand_smar(const SmarSpec& s) {
  if (s.season < 2) throw InvalidArgument("seasonal period must be >= 2");
  auto check = [](const std::vector<double>& a, const char* name) {
    if (!is_stationary_ar(a)) throw NonStationary(std::string(name) + " polynomial is not stationary");
  };
  check(s.phi, "phi");
  check(s.varphi, "varphi");
  check(s.Phi, "Phi");
  check(s.Psi, "Psi");
  const auto causal = Polynomial::from_ar(s.phi) * Polynomial::from_ar(s.Phi).in_power(s.season);
  const auto noncausal = Polynomial::from_ar(s.varphi) * Polynomial::from_ar(s.Psi).in_power(s.season);
  MarModel m;
  // Orders are nominal (R*S + r, Q*S + q) even when leading products vanish.
  m.phi = causal.ar_coefficients(static_cast<int>(s.Phi.size()) * s.season + static_cast<int>(s.phi.size()));
  m.varphi = noncausal.ar_coefficients(static_cast<int>(s.Psi.size()) * s.season + static_cast<int>(s.varphi.size()));
  m.intercept = s.intercept;
  return m;
}

}  // namespace smar
