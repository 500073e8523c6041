#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "smar/error.hpp"
#include "smar/polynomial.hpp"
#include "smar/roots.hpp"
#include "smar/spectra.hpp"

namespace smar {

/// Least-squares AR(p): y_t = c + a_1 y_{t-1} + ... + a_p y_{t-p} + e_t.
struct ArFit {
  int p = 0;
  std::vector<double> a;
  bool with_intercept = true;
  double intercept = 0.0;  // regression constant c
  double mean = 0.0;       // c / (1 - sum a), the level the polynomial acts around
  std::vector<double> residuals;
  std::size_t first_index = 0;  // 0-based time index of residuals[0]
  double sigma2 = 0.0;
  double loglik_gaussian = 0.0;
  double bic = 0.0;

  Polynomial polynomial() const { return Polynomial::from_ar(a); }
  std::size_t n_eff() const noexcept { return residuals.size(); }
};

namespace detail {

// OLS on observations t = start..T-1 (0-based), start >= p.
inline ArFit ols_ar(std::span<const double> y, int p, bool with_intercept, std::size_t start) {
  const std::size_t T = y.size();
  const std::size_t n = T - start;
  const int k = p + (with_intercept ? 1 : 0);
  ArFit fit;
  fit.p = p;
  fit.with_intercept = with_intercept;
  fit.first_index = start;
  fit.a.assign(static_cast<std::size_t>(p), 0.0);
  Eigen::VectorXd target(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) target(static_cast<Eigen::Index>(i)) = y[start + i];
  Eigen::VectorXd resid = target;
  if (k > 0) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), k);
    for (std::size_t i = 0; i < n; ++i) {
      int col = 0;
      if (with_intercept) X(static_cast<Eigen::Index>(i), col++) = 1.0;
      for (int j = 1; j <= p; ++j) X(static_cast<Eigen::Index>(i), col++) = y[start + i - static_cast<std::size_t>(j)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) throw RankDeficient("singular AR(" + std::to_string(p) + ") design: series is (near) constant");
    const Eigen::VectorXd beta = qr.solve(target);
    resid = target - X * beta;
    int col = 0;
    if (with_intercept) fit.intercept = beta(col++);
    for (int j = 0; j < p; ++j) fit.a[static_cast<std::size_t>(j)] = beta(col++);
  }
  fit.residuals.assign(resid.data(), resid.data() + resid.size());
  const double rss = resid.squaredNorm();
  const double nn = static_cast<double>(n);
  fit.sigma2 = rss / nn;
  if (!(fit.sigma2 > 0.0)) throw DegenerateInput("AR fit has zero residual variance");
  double asum = 0.0;
  for (double v : fit.a) asum += v;
  fit.mean = std::abs(1.0 - asum) > 1e-12 ? fit.intercept / (1.0 - asum) : std::numeric_limits<double>::quiet_NaN();
  fit.loglik_gaussian = -0.5 * nn * (std::log(2.0 * std::numbers::pi * fit.sigma2) + 1.0);
  fit.bic = nn * std::log(fit.sigma2) + k * std::log(nn);
  return fit;
}

}  // namespace detail

/// Fits on the full sample t = p+1..T. Requires T > 5(p+1).
inline ArFit fit_ar_ols(std::span<const double> y, int p, bool with_intercept = true) {
  if (p < 0) throw InvalidArgument("AR order must be >= 0");
  if (y.size() <= 5 * static_cast<std::size_t>(p + 1)) {
    throw InvalidArgument("series too short for AR(" + std::to_string(p) + "): need more than " +
                          std::to_string(5 * (p + 1)) + " observations");
  }
  return detail::ols_ar(y, p, with_intercept, static_cast<std::size_t>(p));
}

struct OrderRow {
  int p = 0;
  double sigma2 = 0.0;
  double bic = 0.0;
};

struct OrderSelection {
  int p = 0;
  std::vector<OrderRow> table;
};

/// BIC over p = 1..p_max, every order fitted on the common sample
/// t = p_max+1..T so the criteria are comparable.
inline OrderSelection select_ar_order(std::span<const double> y, int p_max, bool with_intercept = true) {
  if (p_max < 1) throw InvalidArgument("p_max must be >= 1");
  if (static_cast<std::size_t>(p_max) * 10 >= y.size()) throw InvalidArgument("p_max must be below T/10");
  OrderSelection out;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= p_max; ++p) {
    const auto fit = detail::ols_ar(y, p, with_intercept, static_cast<std::size_t>(p_max));
    out.table.push_back({p, fit.sigma2, fit.bic});
    if (fit.bic < best) {
      best = fit.bic;
      out.p = p;
    }
  }
  return out;
}

struct LjungBox {
  int h = 0;
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Q = n(n+2) sum_{k<=h} r_k^2 / (n-k), chi-square with h - fitted_params dof.
inline LjungBox ljung_box(std::span<const double> x, int h, int fitted_params = 0) {
  if (h <= fitted_params) throw InvalidArgument("Ljung-Box horizon must exceed the number of fitted parameters");
  if (fitted_params < 0) throw InvalidArgument("fitted parameter count must be >= 0");
  const auto r = acf(x, h);
  const double n = static_cast<double>(x.size());
  double q = 0.0;
  for (int k = 1; k <= h; ++k) q += r[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(k)] / (n - k);
  q *= n * (n + 2.0);
  LjungBox lb;
  lb.h = h;
  lb.statistic = q;
  lb.dof = h - fitted_params;
  lb.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<>(lb.dof), q));
  return lb;
}

/// min(10, floor(n/5)).
inline int default_ljung_box_horizon(std::size_t n) { return std::min<int>(10, static_cast<int>(n / 5)); }

struct JarqueBera {
  double statistic = 0.0;
  double p_value = 1.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

inline JarqueBera jarque_bera(std::span<const double> x) {
  if (x.size() < 20) throw InvalidArgument("Jarque-Bera requires at least 20 observations");
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean, d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) throw DegenerateInput("Jarque-Bera of a constant series");
  JarqueBera jb;
  jb.skewness = m3 / std::pow(m2, 1.5);
  jb.kurtosis = m4 / (m2 * m2);
  jb.statistic = n / 6.0 * (jb.skewness * jb.skewness + 0.25 * (jb.kurtosis - 3.0) * (jb.kurtosis - 3.0));
  jb.p_value = std::exp(-0.5 * jb.statistic);  // chi-square(2) upper tail
  return jb;
}

struct RecoveredRoot {
  RootEntry entry;
  double root_modulus = 0.0;  // |root|
  FrequencyLabel label;
};

/// Roots of the fitted AR polynomial, ordered by |frequency| then inverse
/// modulus, with seasonal labels for period S.
inline std::vector<RecoveredRoot> recover_roots(const ArFit& fit, int S) {
  if (fit.p < 1) throw InvalidArgument("root recovery needs an AR order >= 1");
  const auto poly = fit.polynomial();
  std::vector<RecoveredRoot> out;
  if (poly.degree() == 0) return out;
  const auto rs = poly_roots(poly);
  for (const auto& e : rs.entries) {
    for (int m = 0; m < e.multiplicity; ++m) out.push_back({e, std::abs(e.root), classify_root(e, S)});
  }
  return out;
}

struct DiagnosticsReport {
  std::vector<LjungBox> ljung_box;
  JarqueBera jarque_bera;
  std::vector<OrderRow> order_table;
};

/// Residual diagnostics for a fitted AR: Ljung-Box at the default horizon
/// and twice it (where the sample allows), plus Jarque-Bera.
inline DiagnosticsReport diagnose(const ArFit& fit, std::vector<OrderRow> order_table = {}) {
  DiagnosticsReport rep;
  const std::size_t n = fit.residuals.size();
  const int h = default_ljung_box_horizon(n);
  for (int hh : {h, 2 * h}) {
    if (hh > fit.p && static_cast<std::size_t>(hh) < n) rep.ljung_box.push_back(ljung_box(fit.residuals, hh, fit.p));
  }
  rep.jarque_bera = jarque_bera(fit.residuals);
  rep.order_table = std::move(order_table);
  return rep;
}

}  // namespace smar
