#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smar/errdist.hpp"
#include "smar/error.hpp"
#include "smar/model.hpp"
#include "smar/optim.hpp"

namespace smar {

/// Estimation parameters. sigma and nu live on the log scale.
struct ParamVector {
  std::vector<double> phi;
  std::vector<double> varphi;
  double intercept = 0.0;
  double log_sigma = 0.0;
  double log_nu = std::log(3.0);

  MarModel model() const { return MarModel{phi, varphi, intercept}; }
  double sigma() const { return std::exp(log_sigma); }
  double nu() const { return std::exp(log_nu); }
};

inline constexpr double kPenaltyBase = -1e12;
inline constexpr double kMinNu = 0.1;
inline constexpr double kMaxNu = 1e6;

struct AmlOptions {
  ErrorFamily family = ErrorFamily::student_t;  // cauchy fixes nu = 1
  bool estimate_intercept = true;
  NelderMeadOptions optimizer;
};

namespace detail {

/// eps_t = phi(L) varphi(L^{-1}) (y_t - m) for t = r+1..T-q (1-based).
inline std::vector<double> mar_residuals(std::span<const double> y, std::span<const double> phi,
                                         std::span<const double> varphi, double m) {
  const std::size_t T = y.size(), r = phi.size(), q = varphi.size();
  if (T <= r + q) return {};
  // w_t = varphi(F) (y_t - m), defined for t = 0..T-q-1 (0-based)
  std::vector<double> w(T - q);
  for (std::size_t t = 0; t + q < T; ++t) {
    double s = y[t] - m;
    for (std::size_t j = 1; j <= q; ++j) s -= varphi[j - 1] * (y[t + j] - m);
    w[t] = s;
  }
  std::vector<double> e(T - q - r);
  for (std::size_t t = r; t < w.size(); ++t) {
    double s = w[t];
    for (std::size_t i = 1; i <= r; ++i) s -= phi[i - 1] * w[t - i];
    e[t - r] = s;
  }
  return e;
}

inline double constraint_violation(std::span<const double> a) {
  if (is_stationary_ar(a)) return 0.0;
  try {
    return std::max(0.0, 1.0 - min_root_modulus(a)) + 1e-12;
  } catch (const Error&) {
    return 1.0;
  }
}

}  // namespace detail

/// Penalty used for infeasible parameters; more negative the further the
/// point is from the feasible region.
inline double aml_penalty(double violation) { return kPenaltyBase * (1.0 + violation); }

inline bool is_penalty(double ll) { return ll <= kPenaltyBase; }

/// Approximate log-likelihood sum_{t=r+1}^{T-q} log f_sigma(eps_t).
inline double loglik(const ParamVector& th, std::span<const double> y, ErrorFamily family = ErrorFamily::student_t) {
  double viol = detail::constraint_violation(th.phi) + detail::constraint_violation(th.varphi);
  const double sigma = th.sigma();
  if (!std::isfinite(th.log_sigma) || !(sigma > 0.0) || !std::isfinite(sigma)) viol += 1.0;
  double nu = 1.0;
  if (family == ErrorFamily::student_t) {
    nu = th.nu();
    if (!std::isfinite(th.log_nu)) {
      viol += 1.0;
    } else if (nu < kMinNu) {
      viol += kMinNu - nu;
    } else if (nu > kMaxNu) {
      viol += std::log(nu / kMaxNu);
    }
  }
  if (!std::isfinite(th.intercept)) viol += 1.0;
  if (viol > 0.0) return aml_penalty(viol);

  const auto e = detail::mar_residuals(y, th.phi, th.varphi, th.intercept);
  double ll = 0.0;
  if (family == ErrorFamily::cauchy) {
    const double c = -std::log(std::numbers::pi * sigma);
    for (double v : e) {
      const double z = v / sigma;
      ll += c - std::log1p(z * z);
    }
  } else {
    const double c = t_log_normalizer(nu, sigma), k = 0.5 * (nu + 1.0), inv = 1.0 / (nu * sigma * sigma);
    for (double v : e) ll += c - k * std::log1p(v * v * inv);
  }
  return std::isfinite(ll) ? ll : aml_penalty(1.0);
}

struct EstimationResult {
  MarModel model;
  ErrorSpec error;
  double loglik = 0.0;
  std::vector<std::string> param_names;
  std::vector<double> estimates;                 // natural scale, same order as param_names
  std::vector<std::optional<double>> std_errors;  // empty until standard_errors() runs
  std::vector<double> residuals;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  ParamVector start_used;
  std::size_t start_index = 0;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<double> pack(const ParamVector& p, const AmlOptions& o) {
  std::vector<double> x(p.phi.begin(), p.phi.end());
  x.insert(x.end(), p.varphi.begin(), p.varphi.end());
  if (o.estimate_intercept) x.push_back(p.intercept);
  x.push_back(p.log_sigma);
  if (o.family == ErrorFamily::student_t) x.push_back(p.log_nu);
  return x;
}

inline ParamVector unpack(const std::vector<double>& x, int r, int q, const AmlOptions& o, double fixed_intercept) {
  ParamVector p;
  std::size_t i = 0;
  p.phi.assign(x.begin(), x.begin() + r);
  i += static_cast<std::size_t>(r);
  p.varphi.assign(x.begin() + static_cast<std::ptrdiff_t>(i), x.begin() + static_cast<std::ptrdiff_t>(i) + q);
  i += static_cast<std::size_t>(q);
  p.intercept = o.estimate_intercept ? x[i++] : fixed_intercept;
  p.log_sigma = x[i++];
  p.log_nu = o.family == ErrorFamily::student_t ? x[i++] : 0.0;
  return p;
}

inline std::vector<std::string> param_names(int r, int q, const AmlOptions& o) {
  std::vector<std::string> n;
  for (int i = 1; i <= r; ++i) n.push_back("phi" + std::to_string(i));
  for (int i = 1; i <= q; ++i) n.push_back("varphi" + std::to_string(i));
  if (o.estimate_intercept) n.push_back("intercept");
  n.push_back("sigma");
  if (o.family == ErrorFamily::student_t) n.push_back("nu");
  return n;
}

// Natural-scale parameter vector (sigma, nu instead of their logs).
inline std::vector<double> natural(const ParamVector& p, const AmlOptions& o) {
  auto x = pack(p, o);
  const std::size_t k = x.size() - (o.family == ErrorFamily::student_t ? 2 : 1);
  for (std::size_t i = k; i < x.size(); ++i) x[i] = std::exp(x[i]);
  return x;
}

inline ParamVector from_natural(const std::vector<double>& v, int r, int q, const AmlOptions& o, double m) {
  auto x = v;
  const std::size_t k = x.size() - (o.family == ErrorFamily::student_t ? 2 : 1);
  for (std::size_t i = k; i < x.size(); ++i) x[i] = x[i] > 0.0 ? std::log(x[i]) : -std::numeric_limits<double>::infinity();
  return unpack(x, r, q, o, m);
}

}  // namespace detail

/// Maximizes the approximate likelihood from every start by Nelder-Mead and
/// keeps the best terminal point (earliest start wins ties).
inline EstimationResult fit_aml(std::span<const double> y, int r, int q, const std::vector<ParamVector>& starts,
                                const AmlOptions& opt = {}) {
  if (starts.empty()) throw InvalidArgument("fit_aml needs at least one start");
  if (static_cast<int>(y.size()) <= r + q + 5) throw InvalidArgument("series too short for MAR(" +
                                                                     std::to_string(r) + "," + std::to_string(q) + ")");
  const double fixed_m = starts.front().intercept;
  std::optional<NelderMeadResult> best;
  std::size_t best_index = 0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const auto& st = starts[s];
    if (static_cast<int>(st.phi.size()) != r || static_cast<int>(st.varphi.size()) != q) {
      throw InvalidArgument("start vector does not match MAR(" + std::to_string(r) + "," + std::to_string(q) + ")");
    }
    if (is_penalty(loglik(st, y, opt.family))) continue;
    auto obj = [&](const std::vector<double>& x) { return -loglik(detail::unpack(x, r, q, opt, fixed_m), y, opt.family); };
    auto res = nelder_mead(obj, detail::pack(st, opt), opt.optimizer);
    if (!best || res.f < best->f) {
      best = std::move(res);
      best_index = s;
    }
  }
  if (!best) throw NoFeasibleStart("all starting values for MAR(" + std::to_string(r) + "," + std::to_string(q) +
                                   ") are non-stationary or invalid");
  const ParamVector th = detail::unpack(best->x, r, q, opt, fixed_m);
  EstimationResult out;
  out.model = th.model();
  out.error = opt.family == ErrorFamily::cauchy ? ErrorSpec::cauchy(th.sigma()) : ErrorSpec::student_t(th.nu(), th.sigma());
  out.loglik = -best->f;
  out.param_names = detail::param_names(r, q, opt);
  out.estimates = detail::natural(th, opt);
  out.residuals = detail::mar_residuals(y, th.phi, th.varphi, th.intercept);
  out.converged = best->converged;
  out.iterations = best->iterations;
  out.evaluations = best->evaluations;
  out.start_used = starts[best_index];
  out.start_index = best_index;
  if (opt.family == ErrorFamily::student_t && th.nu() <= 2.0) {
    out.warnings.push_back("estimated degrees of freedom " + std::to_string(th.nu()) +
                           " <= 2: the fitted error law has infinite variance");
  }
  if (!out.converged) out.warnings.push_back("optimizer stopped at the evaluation limit");
  return out;
}

/// Square roots of the diagonal of the inverse negative Hessian in natural
/// parameters, by central differences with step 1e-4 (1 + |theta_i|).
/// Entries touching a penalized point or with a non-positive variance are
/// left undefined.
inline std::vector<std::optional<double>> standard_errors(const EstimationResult& res, std::span<const double> y,
                                                          const AmlOptions& opt = {}) {
  const int r = res.model.r(), q = res.model.q();
  const auto theta = res.estimates;
  const std::size_t k = theta.size();
  const double m = res.model.intercept;
  auto f = [&](const std::vector<double>& v) { return loglik(detail::from_natural(v, r, q, opt, m), y, opt.family); };
  std::vector<double> h(k);
  for (std::size_t i = 0; i < k; ++i) h[i] = 1e-4 * (1.0 + std::abs(theta[i]));
  const double f0 = f(theta);
  std::vector<bool> bad(k, is_penalty(f0));
  Eigen::MatrixXd H(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
    auto v = theta;
    v[i] += di;
    v[j] += dj;
    const double val = f(v);
    if (is_penalty(val)) {
      bad[i] = true;
      bad[j] = true;
    }
    return val;
  };
  for (std::size_t i = 0; i < k; ++i) {
    const double fp = at(i, h[i], i, 0.0), fm = at(i, -h[i], i, 0.0);
    H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double v = (at(i, h[i], j, h[j]) - at(i, h[i], j, -h[j]) - at(i, -h[i], j, h[j]) + at(i, -h[i], j, -h[j])) /
                       (4.0 * h[i] * h[j]);
      H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  std::vector<std::optional<double>> se(k);
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < k; ++i) {
    if (!bad[i]) keep.push_back(static_cast<Eigen::Index>(i));
  }
  if (keep.empty()) return se;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = 0; b < keep.size(); ++b) {
      A(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = -H(keep[a], keep[b]);
    }
  }
  if (!A.allFinite()) return se;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) return se;
  const Eigen::MatrixXd cov = lu.inverse();
  for (std::size_t a = 0; a < keep.size(); ++a) {
    const double v = cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a));
    if (v > 0.0 && std::isfinite(v)) se[static_cast<std::size_t>(keep[a])] = std::sqrt(v);
  }
  return se;
}

/// Starting vector for MAR(r, q) from coefficient guesses; sigma from the
/// residual scale, nu = 3.
inline ParamVector make_start(std::span<const double> y, std::vector<double> phi, std::vector<double> varphi,
                              double intercept) {
  ParamVector p;
  p.phi = std::move(phi);
  p.varphi = std::move(varphi);
  p.intercept = intercept;
  const auto e = detail::mar_residuals(y, p.phi, p.varphi, intercept);
  // Median absolute residual over the t(3) quartile gives a robust scale.
  std::vector<double> a;
  a.reserve(e.size());
  for (double v : e) a.push_back(std::abs(v));
  double scale = 1.0;
  if (!a.empty()) {
    std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(a.size() / 2), a.end());
    scale = a[a.size() / 2] / 0.7649;
  }
  p.log_sigma = std::log(scale > 0.0 && std::isfinite(scale) ? scale : 1.0);
  p.log_nu = std::log(3.0);
  return p;
}

}  // namespace smar
