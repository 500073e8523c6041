#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/cauchy.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "smar/error.hpp"
#include "smar/rng.hpp"

namespace smar {

enum class ErrorFamily { student_t, cauchy };

inline const char* to_string(ErrorFamily f) { return f == ErrorFamily::student_t ? "t" : "cauchy"; }

inline ErrorFamily parse_error_family(const std::string& s) {
  if (s == "t" || s == "student_t") return ErrorFamily::student_t;
  if (s == "cauchy") return ErrorFamily::cauchy;
  throw InvalidArgument("unknown error family '" + s + "'");
}

/// Location-zero scale family: Student's t(nu) scaled by sigma, or Cauchy(sigma).
struct ErrorSpec {
  ErrorFamily family = ErrorFamily::student_t;
  double nu = 3.0;  // ignored for cauchy
  double sigma = 1.0;

  static ErrorSpec student_t(double nu, double sigma = 1.0) { return {ErrorFamily::student_t, nu, sigma}; }
  static ErrorSpec cauchy(double sigma = 1.0) { return {ErrorFamily::cauchy, 1.0, sigma}; }

  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("error scale must be positive");
    if (family == ErrorFamily::student_t && (!(nu > 0.0) || !std::isfinite(nu))) {
      throw InvalidArgument("degrees of freedom must be positive");
    }
  }

  /// Second moment does not exist.
  bool infinite_variance() const noexcept { return family == ErrorFamily::cauchy || nu <= 2.0; }
};

/// Normalizing constant of the scaled t density, split out so the likelihood
/// loop pays for lgamma once per parameter vector rather than per residual.
inline double t_log_normalizer(double nu, double sigma) {
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi) -
         std::log(sigma);
}

inline double log_density(const ErrorSpec& spec, double x) {
  if (!std::isfinite(x)) throw DomainError("log_density of a non-finite value");
  const double z = x / spec.sigma;
  if (spec.family == ErrorFamily::cauchy) {
    return -std::log(std::numbers::pi * spec.sigma) - std::log1p(z * z);
  }
  return t_log_normalizer(spec.nu, spec.sigma) - 0.5 * (spec.nu + 1.0) * std::log1p(z * z / spec.nu);
}

inline double cdf(const ErrorSpec& spec, double x) {
  if (spec.family == ErrorFamily::cauchy) {
    return boost::math::cdf(boost::math::cauchy_distribution<>(0.0, spec.sigma), x);
  }
  return boost::math::cdf(boost::math::students_t_distribution<>(spec.nu), x / spec.sigma);
}

inline double quantile(const ErrorSpec& spec, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile requires p in (0, 1)");
  if (spec.family == ErrorFamily::cauchy) {
    return boost::math::quantile(boost::math::cauchy_distribution<>(0.0, spec.sigma), p);
  }
  return spec.sigma * boost::math::quantile(boost::math::students_t_distribution<>(spec.nu), p);
}

/// i.i.d. draws. t is sigma * Z / sqrt(chi2_nu / nu); Cauchy is
/// sigma * tan(pi (U - 1/2)).
inline std::vector<double> sample(const ErrorSpec& spec, std::size_t n, CounterRng& rng) {
  spec.validate();
  std::vector<double> out(n);
  if (spec.family == ErrorFamily::cauchy) {
    for (auto& v : out) v = spec.sigma * std::tan(std::numbers::pi * (rng.uniform_open() - 0.5));
    return out;
  }
  std::normal_distribution<double> normal;
  std::chi_squared_distribution<double> chi2(spec.nu);
  for (auto& v : out) {
    const double z = normal(rng);
    v = spec.sigma * z / std::sqrt(chi2(rng) / spec.nu);
  }
  return out;
}

inline std::vector<double> sample(const ErrorSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample size must be >= 1");
  CounterRng rng(seed);
  return sample(spec, n, rng);
}

/// i.i.d. N(0, sigma^2) draws; only used for Gaussian calibration checks.
inline std::vector<double> sample_gaussian(std::size_t n, CounterRng& rng, double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> out(n);
  for (auto& v : out) v = normal(rng);
  return out;
}

}  // namespace smar
