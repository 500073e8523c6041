#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "smar/error.hpp"
#include "smar/polynomial.hpp"
#include "smar/roots.hpp"

namespace smar {

enum class Direction { lag, lead };

inline const char* to_string(Direction d) { return d == Direction::lag ? "lag" : "lead"; }

/// d * (alpha X)^shift / (1 - alpha X)^power with X = L (lag) or L^{-1} (lead).
struct PartialFractionTerm {
  cplx numerator;
  cplx pole;  // alpha, an inverse root
  double modulus = 0.0;
  double frequency = 0.0;
  Direction direction = Direction::lag;
  int lag_shift = 0;
  int power = 1;
};

struct PartialFraction {
  std::vector<PartialFractionTerm> terms;
};

/// Coefficients xi_j for j in [j_min, j_max] of a two-sided filter
/// sum_j xi_j L^{-j}; positive j index leads.
struct TwoSidedSeries {
  int j_min = 0;
  std::vector<double> coeffs;

  int j_max() const noexcept { return j_min + static_cast<int>(coeffs.size()) - 1; }
  double at(int j) const {
    if (j < j_min || j > j_max()) return 0.0;
    return coeffs[static_cast<std::size_t>(j - j_min)];
  }
};

namespace detail {

struct Pole {
  cplx alpha;
  int multiplicity;
};

inline std::vector<Pole> stationary_poles(const RootSet& rs, const char* side) {
  std::vector<Pole> poles;
  for (const auto& e : rs.entries) {
    if (!(e.modulus < 1.0)) {
      throw NonStationary(std::string(side) + " polynomial has a root on or inside the unit circle");
    }
    if (e.multiplicity > 2) {
      throw UnsupportedMultiplicity(std::string(side) + " polynomial has a root of multiplicity " +
                                    std::to_string(e.multiplicity));
    }
    poles.push_back({e.inverse_root, e.multiplicity});
  }
  return poles;
}

// One-sided expansion 1/prod_k (1 - a_k z)^{m_k} = sum_k sum_p c_{k,p}/(1 - a_k z)^p.
// Returned as (pole index, power, coefficient).
inline std::vector<std::tuple<std::size_t, int, cplx>> one_sided(const std::vector<Pole>& poles) {
  std::vector<std::tuple<std::size_t, int, cplx>> out;
  for (std::size_t k = 0; k < poles.size(); ++k) {
    const cplx a = poles[k].alpha;
    // G(1/a) with G = (1 - a z)^{m_k} / prod_j (1 - a_j z)^{m_j}.
    cplx g = 1.0;
    cplx log_deriv = 0.0;
    for (std::size_t j = 0; j < poles.size(); ++j) {
      if (j == k) continue;
      const cplx w = 1.0 - poles[j].alpha / a;
      g /= poles[j].multiplicity == 1 ? w : w * w;
      log_deriv += static_cast<double>(poles[j].multiplicity) * poles[j].alpha / w;
    }
    if (poles[k].multiplicity == 1) {
      out.emplace_back(k, 1, g);
    } else {
      out.emplace_back(k, 2, g);
      out.emplace_back(k, 1, -g * log_deriv / a);
    }
  }
  return out;
}

}  // namespace detail

/// Partial fraction decomposition of 1 / [causal(L) * noncausal(L^{-1})] from
/// the inverse roots of both sides.
///
/// Each side is first split on its own; products of a causal and a lead term
/// are then rewritten with kappa = 1/(1 - a b) and L L^{-1} = 1, e.g.
///   1/((1-aL)(1-bF)) = kappa * [aL/(1-aL) + 1/(1-bF)].
/// Terms sharing pole, direction, shift and power are merged.
inline PartialFraction partial_fractions(const RootSet& causal, const RootSet& noncausal) {
  const auto cp = detail::stationary_poles(causal, "causal");
  const auto np = detail::stationary_poles(noncausal, "noncausal");

  using Key = std::tuple<int, std::size_t, int, int>;  // direction, pole, shift, power
  std::map<Key, cplx> acc;
  auto add = [&](Direction d, std::size_t pole, int shift, int power, cplx v) {
    acc[{static_cast<int>(d), pole, shift, power}] += v;
  };

  const auto cs = detail::one_sided(cp);
  const auto ns = detail::one_sided(np);
  if (np.empty()) {
    for (const auto& [k, p, c] : cs) add(Direction::lag, k, 0, p, c);
  } else if (cp.empty()) {
    for (const auto& [l, s, e] : ns) add(Direction::lead, l, 0, s, e);
  } else {
    for (const auto& [k, p, c] : cs) {
      for (const auto& [l, s, e] : ns) {
        const cplx ab = cp[k].alpha * np[l].alpha;
        if (std::abs(1.0 - ab) < 1e-12) throw Degeneracy("causal and noncausal poles with product equal to one");
        const cplx kap = 1.0 / (1.0 - ab);
        const cplx w = c * e;
        const cplx k2 = kap * kap, k3 = k2 * kap;
        if (p == 1 && s == 1) {
          add(Direction::lag, k, 1, 1, w * kap);
          add(Direction::lead, l, 0, 1, w * kap);
        } else if (p == 2 && s == 1) {
          add(Direction::lag, k, 1, 2, w * kap);
          add(Direction::lag, k, 1, 1, w * k2);
          add(Direction::lead, l, 0, 1, w * k2);
        } else if (p == 1 && s == 2) {
          add(Direction::lead, l, 0, 2, w * kap);
          add(Direction::lead, l, 0, 1, w * (k2 - kap));
          add(Direction::lag, k, 1, 1, w * k2);
        } else {
          add(Direction::lag, k, 1, 2, w * k2);
          add(Direction::lag, k, 1, 1, w * (2.0 * k3 - k2));
          add(Direction::lead, l, 0, 2, w * k2);
          add(Direction::lead, l, 0, 1, w * (2.0 * k3 - 2.0 * k2));
        }
      }
    }
  }

  PartialFraction pf;
  if (cp.empty() && np.empty()) {
    // The identity filter, written as 1/(1 - 0 L).
    PartialFractionTerm t;
    t.numerator = 1.0;
    t.pole = 0.0;
    pf.terms.push_back(t);
    return pf;
  }
  for (const auto& [key, v] : acc) {
    const auto [d, pole, shift, power] = key;
    PartialFractionTerm t;
    t.direction = static_cast<Direction>(d);
    t.pole = t.direction == Direction::lag ? cp[pole].alpha : np[pole].alpha;
    t.modulus = std::abs(t.pole);
    t.frequency = principal_argument(t.pole);
    t.numerator = v;
    t.lag_shift = shift;
    t.power = power;
    pf.terms.push_back(t);
  }
  return pf;
}

inline PartialFraction partial_fractions(const Polynomial& causal, const Polynomial& noncausal) {
  const RootSet cr = causal.degree() > 0 ? poly_roots(causal) : RootSet{};
  const RootSet nr = noncausal.degree() > 0 ? poly_roots(noncausal) : RootSet{};
  return partial_fractions(cr, nr);
}

/// Sums the series expansions of all terms over [j_min, j_max]. Throws
/// NumericFailure if the imaginary parts fail to cancel.
inline TwoSidedSeries expand(const PartialFraction& pf, int j_min, int j_max) {
  if (j_min > 0 || j_max < 0) throw InvalidArgument("expansion window must contain 0");
  std::vector<cplx> acc(static_cast<std::size_t>(j_max - j_min + 1), 0.0);
  std::vector<double> mag(acc.size(), 0.0);  // scale for the realness test
  for (const auto& t : pf.terms) {
    // Lag-direction terms contribute to j <= 0, lead terms to j >= 0.
    const int limit = t.direction == Direction::lag ? -j_min : j_max;
    const int sign = t.direction == Direction::lag ? -1 : 1;
    cplx apow = t.lag_shift == 0 ? cplx(1.0) : std::pow(t.pole, t.lag_shift);
    for (int n = 0; n + t.lag_shift <= limit; ++n) {
      const cplx v = t.numerator * apow * (t.power == 1 ? 1.0 : static_cast<double>(n + 1));
      const auto idx = static_cast<std::size_t>(sign * (n + t.lag_shift) - j_min);
      acc[idx] += v;
      mag[idx] += std::abs(v);
      apow *= t.pole;
    }
  }
  TwoSidedSeries out;
  out.j_min = j_min;
  out.coeffs.resize(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (std::abs(acc[i].imag()) > 1e-12 * (1.0 + mag[i])) {
      throw NumericFailure("partial fraction expansion is not real", std::abs(acc[i].imag()));
    }
    out.coeffs[i] = acc[i].real();
  }
  return out;
}

}  // namespace smar
