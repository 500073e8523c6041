#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "smar/errdist.hpp"
#include "smar/error.hpp"
#include "smar/model.hpp"
#include "smar/rng.hpp"

namespace smar {

struct TimeSeries {
  std::vector<double> values;
  std::string origin;  // "simulate:<dgp> seed=<n>" or the source file
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return values.size(); }
};

/// max(200, ceil(log(1e-10) / log(rho_max))).
inline int default_burn_in(const MarModel& model) {
  const double rho = model.max_inverse_modulus();
  if (rho <= 0.0) return 200;
  return std::max(200, static_cast<int>(std::ceil(std::log(1e-10) / std::log(rho))));
}

/// Filters T + 2B innovations through varphi(L^{-1})^{-1} (backward pass with
/// terminal zeros) and then phi(L)^{-1} (forward pass with initial zeros),
/// keeps the middle T values and adds the intercept.
inline std::vector<double> filter_mar(const MarModel& model, std::span<const double> eps, int burn_in) {
  if (burn_in < 0) throw InvalidArgument("burn-in must be >= 0");
  const std::size_t n = eps.size();
  const std::size_t b = static_cast<std::size_t>(burn_in);
  if (n <= 2 * b) throw InvalidArgument("innovation sequence shorter than twice the burn-in");
  std::vector<double> x(eps.begin(), eps.end());
  const std::size_t q = model.varphi.size(), r = model.phi.size();
  if (q > 0) {
    for (std::size_t t = n; t-- > 0;) {
      double s = x[t];
      for (std::size_t i = 1; i <= q && t + i < n; ++i) s += model.varphi[i - 1] * x[t + i];
      x[t] = s;
    }
  }
  if (r > 0) {
    for (std::size_t t = 0; t < n; ++t) {
      double s = x[t];
      for (std::size_t i = 1; i <= r && i <= t; ++i) s += model.phi[i - 1] * x[t - i];
      x[t] = s;
    }
  }
  std::vector<double> y(x.begin() + static_cast<std::ptrdiff_t>(b), x.end() - static_cast<std::ptrdiff_t>(b));
  if (model.intercept != 0.0) {
    for (auto& v : y) v += model.intercept;
  }
  return y;
}

/// Simulates T observations. burn_in < 0 selects default_burn_in(model).
inline TimeSeries simulate_mar(const MarModel& model, const ErrorSpec& spec, int T, int burn_in, std::uint64_t seed) {
  if (T < 1) throw InvalidArgument("series length must be >= 1");
  model.require_stationary();
  spec.validate();
  TimeSeries ts;
  const int def = default_burn_in(model);
  const int b = burn_in < 0 ? def : burn_in;
  if (b < def && (model.r() > 0 || model.q() > 0)) {
    ts.warnings.push_back("burn-in " + std::to_string(b) + " is below the damping length " + std::to_string(def));
  }
  CounterRng rng(seed);
  const auto eps = sample(spec, static_cast<std::size_t>(T) + 2 * static_cast<std::size_t>(b), rng);
  ts.values = filter_mar(model, eps, b);
  ts.origin = "simulate seed=" + std::to_string(seed);
  return ts;
}

struct SeasonalHarmonic {
  int h = 0;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

/// sum_h [a_h cos(2 pi h t / S) + b_h sin(2 pi h t / S)] + c cos(pi t), t = 1..T.
/// The cos(pi t) term exists only for even S.
inline std::vector<double> deterministic_seasonal(std::span<const SeasonalHarmonic> harmonics, double nyquist_coef,
                                                  int S, int T) {
  if (S < 2) throw InvalidArgument("seasonal period must be >= 2");
  if (T < 0) throw InvalidArgument("length must be >= 0");
  const int hmax = (S - 1) / 2;
  for (const auto& h : harmonics) {
    if (h.h < 0 || h.h > hmax) {
      throw InvalidArgument("harmonic " + std::to_string(h.h) + " outside 0.." + std::to_string(hmax) +
                            " for period " + std::to_string(S));
    }
  }
  if (nyquist_coef != 0.0 && S % 2 != 0) throw InvalidArgument("cos(pi t) term requires an even period");
  std::vector<double> out(static_cast<std::size_t>(T), 0.0);
  for (int t = 1; t <= T; ++t) {
    double v = 0.0;
    for (const auto& h : harmonics) {
      // Reduce t mod S first so the argument stays small for long series.
      const double w = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(h.h) * t) % S) / S;
      v += h.cos_coef * std::cos(w) + h.sin_coef * std::sin(w);
    }
    if (nyquist_coef != 0.0) v += nyquist_coef * (t % 2 == 0 ? 1.0 : -1.0);
    out[static_cast<std::size_t>(t - 1)] = v;
  }
  return out;
}

}  // namespace smar
