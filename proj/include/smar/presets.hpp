#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "smar/errdist.hpp"
#include "smar/error.hpp"
#include "smar/model.hpp"

namespace smar {

/// A named data generating process. `frequencies` lists the root
/// frequencies in [0, pi] the spectrum should peak at.
struct Preset {
  std::string name;
  std::string description;
  MarModel model;
  ErrorSpec error;
  int T = 1000;
  int burn_in = -1;  // -1: default_burn_in
  std::uint64_t seed = 1;
  int season = 12;
  std::vector<double> frequencies;
};

namespace detail {

// Coefficients of 1 - 2 rho cos(w) z + rho^2 z^2 in AR form.
inline std::vector<double> pair_ar(double rho, double w) { return {2.0 * rho * std::cos(w), -rho * rho}; }

}  // namespace detail

inline std::vector<Preset> presets() {
  using std::numbers::pi;
  const auto t31 = ErrorSpec::student_t(3.0, 1.0);
  const auto cauchy = ErrorSpec::cauchy(1.0);
  std::vector<Preset> out;

  // Pure AR processes with zero/Nyquist and zero/harmonic roots.
  out.push_back({"fig1a", "AR(2), inverse roots 0.4 and -0.7", MarModel{{-0.3, 0.28}, {}, 0.0}, t31, 1000, -1, 101, 2,
                 {0.0, pi}});
  {
    auto c = Polynomial({1.0, -0.9}) * Polynomial({1.0, 0.6, 0.36});
    out.push_back({"fig1b", "AR(3), inverse roots 0.9 and 0.6 exp(+-2pi i/3)", MarModel{c.ar_coefficients(), {}, 0.0},
                   t31, 1000, -1, 102, 6, {0.0, 2 * pi / 3}});
  }

  // Causal versus noncausal trajectories under Cauchy noise; each pair shares a seed.
  out.push_back({"fig2a-causal", "AR(1) at the Nyquist frequency, alpha = -0.9", MarModel{{-0.9}, {}, 0.0}, cauchy, 200,
                 -1, 201, 2, {pi}});
  out.push_back({"fig2a-noncausal", "MAR(0,1) at the Nyquist frequency, alpha = -0.9", MarModel{{}, {-0.9}, 0.0},
                 cauchy, 200, -1, 201, 2, {pi}});
  out.push_back({"fig2b-causal", "AR(2), inverse roots 0.5 exp(+-2pi i/3)",
                 MarModel{detail::pair_ar(0.5, 2 * pi / 3), {}, 0.0}, cauchy, 200, -1, 202, 3, {2 * pi / 3}});
  out.push_back({"fig2b-noncausal", "MAR(0,2), inverse roots 0.5 exp(+-2pi i/3)",
                 MarModel{{}, detail::pair_ar(0.5, 2 * pi / 3), 0.0}, cauchy, 200, -1, 202, 3, {2 * pi / 3}});

  // The fig1 root sets split over the causal and noncausal polynomials.
  out.push_back({"fig3a", "MAR(1,1), causal 0.4 (zero), noncausal -0.7 (Nyquist)", MarModel{{0.4}, {-0.7}, 0.0}, t31,
                 1000, -1, 301, 2, {0.0, pi}});
  out.push_back({"fig3b", "MAR(2,1), causal 0.6 exp(+-2pi i/3), noncausal 0.9 (zero)",
                 MarModel{detail::pair_ar(0.6, 2 * pi / 3), {0.9}, 0.0}, t31, 1000, -1, 302, 6, {0.0, 2 * pi / 3}});

  // Four mixed processes combining zero, Nyquist and harmonic roots.
  out.push_back({"mar-a", "MAR(1,1), (1 - 0.5L)(1 + 0.7L^-1)", MarModel{{0.5}, {-0.7}, 0.0}, t31, 1000, -1, 401, 2,
                 {0.0, pi}});
  out.push_back({"mar-b", "MAR(1,1), (1 + 0.5L)(1 - 0.7L^-1)", MarModel{{-0.5}, {0.7}, 0.0}, t31, 1000, -1, 402, 2,
                 {pi, 0.0}});
  out.push_back({"mar-c", "MAR(1,2), causal 0.5, noncausal 0.9 exp(+-2pi i/3)",
                 MarModel{{0.5}, detail::pair_ar(0.9, 2 * pi / 3), 0.0}, t31, 1000, -1, 403, 6, {0.0, 2 * pi / 3}});
  out.push_back({"mar-d", "MAR(2,1), causal 0.9 exp(+-pi i/2), noncausal 0.5",
                 MarModel{detail::pair_ar(0.9, pi / 2), {0.5}, 0.0}, t31, 1000, -1, 404, 4, {pi / 2, 0.0}});

  // Monte Carlo designs.
  out.push_back({"root-recovery", "MAR(1,2), causal 0.5, noncausal 0.7 exp(+-5pi i/6)",
                 MarModel{{0.5}, detail::pair_ar(0.7, 5 * pi / 6), 0.0}, t31, 1000, -1, 501, 12, {0.0, 5 * pi / 6}});
  for (double v : {0.3, 0.5, 0.7}) {
    const std::string tag = std::to_string(static_cast<int>(std::lround(v * 10)));
    out.push_back({"selection-0" + tag, "MAR(0,2), noncausal " + std::to_string(v).substr(0, 3) + " exp(+-5pi i/6)",
                   MarModel{{}, detail::pair_ar(v, 5 * pi / 6), 0.0}, t31, 1000, -1, 600 + static_cast<std::uint64_t>(v * 10),
                   12, {5 * pi / 6}});
  }
  return out;
}

inline Preset find_preset(const std::string& name) {
  for (auto& p : presets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw InvalidArgument("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace smar
