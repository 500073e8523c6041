#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smar/aml.hpp"
#include "smar/error.hpp"
#include "smar/model.hpp"
#include "smar/pseudofit.hpp"
#include "smar/roots.hpp"

namespace smar {

/// One way of splitting a root set over the causal and noncausal
/// polynomials, with the coefficient start it implies.
struct AllocationPlan {
  int r = 0;
  int q = 0;
  std::size_t index = 0;  // position in lexicographic enumeration order
  std::vector<cplx> causal_roots;     // inverse roots, repeated by multiplicity
  std::vector<cplx> noncausal_roots;  // inverse roots of the lead polynomial
  std::vector<double> phi;
  std::vector<double> varphi;
  bool naive = false;  // built from split conjugate pairs
};

namespace detail {

// Allocation units: a real root or a whole conjugate pair, one unit per
// unit of multiplicity.
struct Unit {
  std::vector<cplx> members;
};

inline std::vector<Unit> allocation_units(const RootSet& roots) {
  std::vector<Unit> units;
  std::vector<bool> done(roots.entries.size(), false);
  for (std::size_t i = 0; i < roots.entries.size(); ++i) {
    if (done[i]) continue;
    const auto& e = roots.entries[i];
    done[i] = true;
    if (!e.pair_id) {
      for (int m = 0; m < e.multiplicity; ++m) units.push_back({{e.inverse_root}});
      continue;
    }
    for (std::size_t j = i + 1; j < roots.entries.size(); ++j) {
      if (!done[j] && roots.entries[j].pair_id == e.pair_id) {
        done[j] = true;
        for (int m = 0; m < e.multiplicity; ++m) units.push_back({{e.inverse_root, roots.entries[j].inverse_root}});
        break;
      }
    }
  }
  return units;
}

inline std::vector<double> ar_from_inverse(const std::vector<cplx>& inv, int order) {
  return poly_from_roots(std::span<const cplx>(inv)).ar_coefficients(order);
}

inline std::vector<AllocationPlan> enumerate_units(const std::vector<Unit>& units, int r, int q,
                                                  const std::function<bool(const std::vector<bool>&)>& accept = {}) {
  std::vector<AllocationPlan> plans;
  const std::size_t n = units.size();
  std::vector<int> pick;
  std::vector<std::vector<cplx>> seen;  // causal multisets already emitted
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int need) {
    if (need == 0) {
      AllocationPlan plan;
      plan.r = r;
      plan.q = q;
      std::vector<bool> in(n, false);
      for (int i : pick) in[static_cast<std::size_t>(i)] = true;
      for (std::size_t i = 0; i < n; ++i) {
        auto& dst = in[i] ? plan.causal_roots : plan.noncausal_roots;
        dst.insert(dst.end(), units[i].members.begin(), units[i].members.end());
      }
      if (static_cast<int>(plan.noncausal_roots.size()) != q) return;
      if (accept && !accept(in)) return;
      // Repeated roots make distinct subsets equal; keep the first.
      auto key = plan.causal_roots;
      std::sort(key.begin(), key.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
      });
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) return;
      seen.push_back(key);
      plan.index = plans.size();
      plan.phi = ar_from_inverse(plan.causal_roots, r);
      plan.varphi = ar_from_inverse(plan.noncausal_roots, q);
      plans.push_back(std::move(plan));
      return;
    }
    for (std::size_t i = from; i < n; ++i) {
      const int sz = static_cast<int>(units[i].members.size());
      if (sz > need) continue;
      pick.push_back(static_cast<int>(i));
      rec(i + 1, need - sz);
      pick.pop_back();
    }
  };
  rec(0, r);
  return plans;
}

}  // namespace detail

/// Every split of `roots` into r causal and q noncausal roots that keeps
/// conjugate pairs together. An empty result means no such split exists.
inline std::vector<AllocationPlan> enumerate_allocations(const RootSet& roots, int r, int q) {
  if (r < 0 || q < 0) throw InvalidArgument("orders must be >= 0");
  if (r + q != roots.degree()) {
    throw InvalidArgument("r + q = " + std::to_string(r + q) + " does not match " + std::to_string(roots.degree()) +
                          " roots");
  }
  return detail::enumerate_units(detail::allocation_units(roots), r, q);
}

/// How a split conjugate pair is turned into two real starting roots.
enum class NaiveStart {
  inverse_modulus,        // rho on both sides
  reciprocal_real_part,   // 1 / Re(root) = rho / cos(omega)
  inverse_root_real_part  // Re(inverse root) = rho cos(omega)
};

inline const char* to_string(NaiveStart n) {
  switch (n) {
    case NaiveStart::inverse_modulus: return "inverse_modulus";
    case NaiveStart::reciprocal_real_part: return "reciprocal_real_part";
    case NaiveStart::inverse_root_real_part: return "inverse_root_real_part";
  }
  return "?";
}

inline NaiveStart parse_naive_start(const std::string& s) {
  if (s == "inverse_modulus") return NaiveStart::inverse_modulus;
  if (s == "reciprocal_real_part") return NaiveStart::reciprocal_real_part;
  if (s == "inverse_root_real_part") return NaiveStart::inverse_root_real_part;
  throw InvalidArgument("unknown naive start '" + s + "'");
}

/// Allocations for (r, q) after replacing every conjugate pair by two equal
/// real roots, keeping only splits that separate at least one pair. This is
/// the start a practitioner gets by ignoring the pairing.
inline std::vector<AllocationPlan> naive_split_allocations(const RootSet& roots, int r, int q, NaiveStart how) {
  std::vector<detail::Unit> units;
  std::vector<int> pair_of;
  int pair = 0;
  for (const auto& u : detail::allocation_units(roots)) {
    if (u.members.size() == 1) {
      units.push_back(u);
      pair_of.push_back(-1);
      continue;
    }
    const cplx a = u.members[0];
    const double rho = std::abs(a), c = a.real() / rho;
    double v = rho;
    if (how == NaiveStart::reciprocal_real_part) v = c != 0.0 ? rho / c : 0.99;
    if (how == NaiveStart::inverse_root_real_part) v = rho * c;
    v = std::clamp(v, -0.99, 0.99);
    units.push_back({{cplx(v, 0.0)}});
    units.push_back({{cplx(v, 0.0)}});
    pair_of.push_back(pair);
    pair_of.push_back(pair);
    ++pair;
  }
  // Only plans that actually split a pair; the rest are covered by regular plans.
  auto plans = detail::enumerate_units(units, r, q, [&](const std::vector<bool>& in) {
    for (std::size_t i = 0; i + 1 < in.size(); ++i) {
      if (pair_of[i] >= 0 && pair_of[i] == pair_of[i + 1] && in[i] != in[i + 1]) return true;
    }
    return false;
  });
  std::vector<AllocationPlan> out;
  for (auto& p : plans) {
    p.naive = true;
    p.index = out.size();
    out.push_back(std::move(p));
  }
  return out;
}

struct Candidate {
  int r = 0;
  int q = 0;
  AllocationPlan allocation;
  std::optional<EstimationResult> result;
  std::string failure;  // set when the fit failed
};

struct OrderGroup {
  int r = 0;
  int q = 0;
  std::size_t candidates = 0;  // zero marks an infeasible split
  bool naive = false;
};

struct SelectionReport {
  int p = 0;
  ArFit pseudo_causal;
  std::vector<RecoveredRoot> roots;
  JarqueBera gaussianity;
  std::vector<OrderGroup> groups;
  std::vector<Candidate> candidates;  // ranked, successful fits first
  std::optional<std::size_t> winner;
  std::vector<std::string> warnings;
};

struct SelectionOptions {
  AmlOptions aml;
  int season = 12;
  bool naive_split_starts = false;  // add split-pair starts for otherwise infeasible (r, q)
  NaiveStart naive = NaiveStart::inverse_modulus;
  bool perturbation_grid = false;   // extra starts at +-0.1 on each coefficient
  double gaussian_jb_threshold = 0.05;
  double tie_tolerance = 1e-6;
};

namespace detail {

// Pulls inverse roots on or outside the unit circle back to modulus 0.99 so
// every allocation gives a feasible start.
inline RootSet clamp_roots(const RootSet& rs) {
  if (rs.entries.empty()) return rs;
  auto inv = rs.inverse_roots();
  for (auto& a : inv) {
    if (std::abs(a) >= 0.99) a *= 0.99 / std::abs(a);
  }
  return root_set_from_inverse(inv);
}

inline std::vector<ParamVector> plan_starts(std::span<const double> y, const AllocationPlan& plan, double m,
                                            bool grid) {
  std::vector<ParamVector> starts{make_start(y, plan.phi, plan.varphi, m)};
  if (!grid) return starts;
  const std::size_t k = plan.phi.size() + plan.varphi.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (double d : {-0.1, 0.1}) {
      auto phi = plan.phi;
      auto varphi = plan.varphi;
      if (i < phi.size()) {
        phi[i] += d;
      } else {
        varphi[i - phi.size()] += d;
      }
      if (is_stationary_ar(phi) && is_stationary_ar(varphi)) starts.push_back(make_start(y, phi, varphi, m));
    }
  }
  return starts;
}

}  // namespace detail

/// Ranks candidates by log-likelihood. Within tie_tolerance the smaller q
/// wins, then regular plans over naive ones, then the earlier allocation.
inline void rank_candidates(std::vector<Candidate>& c, double tie_tolerance) {
  std::stable_sort(c.begin(), c.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.result.has_value() != b.result.has_value()) return a.result.has_value();
    if (!a.result) return false;
    const double la = a.result->loglik, lb = b.result->loglik;
    if (std::abs(la - lb) > tie_tolerance) return la > lb;
    if (a.q != b.q) return a.q < b.q;
    if (a.allocation.naive != b.allocation.naive) return !a.allocation.naive;
    return a.allocation.index < b.allocation.index;
  });
}

/// Pseudo-causal AR(p), its roots, and AML fits of every MAR(r, q) with r + q = p
/// from every pair-preserving allocation.
inline SelectionReport select_model(std::span<const double> y, int p, const SelectionOptions& opt = {}) {
  if (p < 1) throw InvalidArgument("selection needs p >= 1");
  SelectionReport rep;
  rep.p = p;
  rep.pseudo_causal = fit_ar_ols(y, p, true);
  rep.roots = recover_roots(rep.pseudo_causal, opt.season);
  const auto poly = rep.pseudo_causal.polynomial();
  RootSet roots = poly.degree() > 0 ? poly_roots(poly) : RootSet{};
  if (!roots.stationary()) rep.warnings.push_back("pseudo-causal fit is not stationary; roots pulled inside 0.99");
  roots = detail::clamp_roots(roots);
  // Roots lost to a trailing zero coefficient are restored as tiny roots.
  while (roots.degree() < p) {
    auto inv = roots.inverse_roots();
    inv.push_back(1e-3);
    roots = root_set_from_inverse(inv);
  }
  const double m = std::isfinite(rep.pseudo_causal.mean) ? rep.pseudo_causal.mean : 0.0;
  for (int r = p; r >= 0; --r) {
    const int q = p - r;
    auto plans = enumerate_allocations(roots, r, q);
    OrderGroup g{r, q, 0, false};
    if (plans.empty() && opt.naive_split_starts) {
      plans = naive_split_allocations(roots, r, q, opt.naive);
      g.naive = !plans.empty();
    }
    g.candidates = plans.size();
    rep.groups.push_back(g);
    for (auto& plan : plans) {
      Candidate c;
      c.r = r;
      c.q = q;
      c.allocation = plan;
      try {
        c.result = fit_aml(y, r, q, detail::plan_starts(y, plan, m, opt.perturbation_grid), opt.aml);
      } catch (const Error& e) {
        c.failure = e.what();
      }
      rep.candidates.push_back(std::move(c));
    }
  }
  rank_candidates(rep.candidates, opt.tie_tolerance);
  if (!rep.candidates.empty() && rep.candidates.front().result) rep.winner = 0;
  // Pseudo-causal residuals of a noncausal process are all-pass and can look
  // Gaussian even under heavy tails, so test the winner's residuals.
  rep.gaussianity = jarque_bera(rep.winner ? rep.candidates[*rep.winner].result->residuals : rep.pseudo_causal.residuals);
  if (rep.gaussianity.p_value >= opt.gaussian_jb_threshold) {
    rep.warnings.push_back("residuals look Gaussian (Jarque-Bera p = " + std::to_string(rep.gaussianity.p_value) +
                           "); causal and noncausal orders are not identified");
  }
  return rep;
}

struct SoeReport {
  std::vector<double> residuals;
  LjungBox levels;
  LjungBox squares;
};

/// Residuals of y under the given (possibly misallocated) polynomials with
/// Ljung-Box tests on levels and squares. `fitted_params` is subtracted from
/// the levels test only.
inline SoeReport soe_residuals(std::span<const double> y, const MarModel& model, int h = -1, int fitted_params = 0) {
  model.require_stationary();
  SoeReport rep;
  rep.residuals = detail::mar_residuals(y, model.phi, model.varphi, model.intercept);
  if (rep.residuals.size() < 20) throw InvalidArgument("series too short for residual diagnostics");
  if (h < 0) h = default_ljung_box_horizon(rep.residuals.size());
  rep.levels = ljung_box(rep.residuals, h, fitted_params);
  std::vector<double> sq(rep.residuals.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = rep.residuals[i] * rep.residuals[i];
  rep.squares = ljung_box(sq, h, 0);
  return rep;
}

}  // namespace smar
