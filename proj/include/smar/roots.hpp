#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smar/error.hpp"
#include "smar/polynomial.hpp"
#include "smar/rng.hpp"

namespace smar {

using cplx = std::complex<double>;

/// One distinct root of a real polynomial together with its inverse-root
/// view: modulus rho = |1/root| and frequency omega = arg(1/root).
struct RootEntry {
  cplx root;
  cplx inverse_root;
  double modulus = 0.0;    // |inverse_root|
  double frequency = 0.0;  // principal argument of inverse_root, (-pi, pi]
  int multiplicity = 1;
  std::optional<int> pair_id;  // shared by the two members of a conjugate pair

  bool is_real() const noexcept { return inverse_root.imag() == 0.0; }
};

struct RootSet {
  std::vector<RootEntry> entries;

  /// Number of roots counted with multiplicity.
  int degree() const noexcept {
    int d = 0;
    for (const auto& e : entries) d += e.multiplicity;
    return d;
  }

  double max_modulus() const noexcept {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.modulus);
    return m;
  }

  /// All inverse-root moduli strictly below one.
  bool stationary() const noexcept { return entries.empty() || max_modulus() < 1.0; }

  /// Inverse roots repeated by multiplicity.
  std::vector<cplx> inverse_roots() const {
    std::vector<cplx> out;
    for (const auto& e : entries) out.insert(out.end(), static_cast<std::size_t>(e.multiplicity), e.inverse_root);
    return out;
  }
};

namespace detail {

inline double realness_tol(double re) { return 1e-8 * (1.0 + std::abs(re)); }

inline void require_stationary(const RootSet& rs, const char* what) {
  for (const auto& e : rs.entries) {
    if (!(e.modulus < 1.0)) {
      throw NonStationary(std::string(what) + ": root " + std::to_string(std::abs(e.root)) +
                          " on or inside the unit circle");
    }
  }
}

}  // namespace detail

/// Angle of re + i*im with the positive real axis, in (-pi, pi].
inline double principal_argument(double re, double im) {
  if (re == 0.0 && im == 0.0) throw DomainError("principal argument of zero is undefined");
  // atan2 returns -pi for a negative real with signed zero imaginary part.
  const double w = std::atan2(im == 0.0 ? 0.0 : im, re);
  return w <= -std::numbers::pi ? std::numbers::pi : w;
}

inline double principal_argument(cplx z) { return principal_argument(z.real(), z.imag()); }

namespace detail {

// Pairs conjugates in place: returns groups of indices, each either a single
// real value or a (positive-imag, negative-imag) pair. Values whose imaginary
// part is within realness_tol are snapped to the real axis first.
inline std::vector<std::vector<std::size_t>> pair_conjugates(std::vector<cplx>& z, double match_tol) {
  std::vector<std::size_t> complex_idx;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::abs(z[i].imag()) <= realness_tol(z[i].real())) {
      z[i] = cplx(z[i].real(), 0.0);
      groups.push_back({i});
    } else {
      complex_idx.push_back(i);
    }
  }
  std::sort(complex_idx.begin(), complex_idx.end(), [&](std::size_t a, std::size_t b) {
    if (z[a].real() != z[b].real()) return z[a].real() < z[b].real();
    return std::abs(z[a].imag()) < std::abs(z[b].imag());
  });
  std::vector<bool> used(z.size(), false);
  for (std::size_t ii = 0; ii < complex_idx.size(); ++ii) {
    const std::size_t a = complex_idx[ii];
    if (used[a]) continue;
    used[a] = true;
    std::size_t best = z.size();
    double best_d = 0.0;
    for (std::size_t jj = ii + 1; jj < complex_idx.size(); ++jj) {
      const std::size_t b = complex_idx[jj];
      if (used[b] || (z[b].imag() > 0) == (z[a].imag() > 0)) continue;
      const double d = std::abs(z[b] - std::conj(z[a]));
      if (best == z.size() || d < best_d) {
        best = b;
        best_d = d;
      }
    }
    if (best == z.size() || best_d > match_tol * (1.0 + std::abs(z[a]))) {
      throw ConjugateViolation("complex value " + std::to_string(z[a].real()) + (z[a].imag() < 0 ? "" : "+") +
                               std::to_string(z[a].imag()) + "i has no matching conjugate");
    }
    used[best] = true;
    const double re = 0.5 * (z[a].real() + z[best].real());
    const double im = 0.5 * (std::abs(z[a].imag()) + std::abs(z[best].imag()));
    const std::size_t pos = z[a].imag() > 0 ? a : best;
    const std::size_t neg = z[a].imag() > 0 ? best : a;
    z[pos] = cplx(re, im);
    z[neg] = cplx(re, -im);
    groups.push_back({pos, neg});
  }
  return groups;
}

}  // namespace detail

/// prod_k (1 - alpha_k z) with real coefficients. Repeat a value to give it
/// multiplicity. Complex entries must come with their conjugates.
inline Polynomial poly_from_roots(std::span<const cplx> inverse_roots) {
  std::vector<cplx> z(inverse_roots.begin(), inverse_roots.end());
  for (const auto& a : z) {
    if (a == cplx(0.0, 0.0)) throw InvalidArgument("inverse root equal to zero");
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw InvalidArgument("inverse root is not finite");
  }
  const auto groups = detail::pair_conjugates(z, 1e-6);
  Polynomial p;
  for (const auto& g : groups) {
    const cplx a = z[g[0]];
    if (g.size() == 1) {
      p = p * Polynomial({1.0, -a.real()});
    } else {
      p = p * Polynomial({1.0, -2.0 * a.real(), std::norm(a)});
    }
  }
  return p;
}

inline Polynomial poly_from_roots(const RootSet& roots) {
  const auto inv = roots.inverse_roots();
  return poly_from_roots(std::span<const cplx>(inv));
}

namespace detail {

// Simultaneous Durand-Kerner iteration on the monic version of p. Returns
// the approximations after convergence (max update below tol) or after the
// iteration cap; callers judge the result by its residual.
inline std::vector<cplx> durand_kerner(const Polynomial& p, double angle_offset, double radius_scale) {
  const int n = p.degree();
  const auto& c = p.coeffs();
  std::vector<cplx> monic(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) monic[i] = c[i] / c.back();
  auto eval = [&](cplx z) {
    cplx acc = monic.back();
    for (std::size_t i = monic.size() - 1; i-- > 0;) acc = acc * z + monic[i];
    return acc;
  };
  const double r0 = radius_scale * std::pow(std::abs(c.front() / c.back()), 1.0 / n);
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) z[k] = std::polar(r0, angle_offset + 2.0 * std::numbers::pi * k / n);
  constexpr int kMaxIter = 1000;
  for (int it = 0; it < kMaxIter; ++it) {
    double max_step = 0.0;
    for (int k = 0; k < n; ++k) {
      cplx denom = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != k) denom *= (z[k] - z[j]);
      }
      if (denom == cplx(0.0, 0.0)) denom = cplx(1e-300, 0.0);
      const cplx step = eval(z[k]) / denom;
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[k])));
    }
    if (max_step < 1e-13) break;
  }
  return z;
}

// Merges numerically coincident approximations (the signature of a repeated
// root) and polishes each cluster centre with Newton steps on the derivative
// of matching order.
struct Cluster {
  cplx z;
  int multiplicity;
};

inline std::vector<Cluster> cluster_roots(const Polynomial& p, const std::vector<cplx>& z, double radius) {
  std::vector<bool> used(z.size(), false);
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    cplx sum = z[i];
    int m = 1;
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      if (!used[j] && std::abs(z[j] - z[i]) <= radius * (1.0 + std::abs(z[i]))) {
        used[j] = true;
        sum += z[j];
        ++m;
      }
    }
    cplx c = sum / static_cast<double>(m);
    // The split of a real multiple root leaves imaginary noise at the scale
    // of the cluster itself.
    if (m > 1 && std::abs(c.imag()) <= radius * (1.0 + std::abs(c))) c = cplx(c.real(), 0.0);
    // Newton on p for simple roots, on p' for double roots.
    for (int it = 0; it < 8 && m <= 2; ++it) {
      const auto d = p.eval_derivatives(c);
      const auto k = static_cast<std::size_t>(m - 1);
      if (d[k + 1] == cplx(0.0, 0.0)) break;
      const cplx next = c - d[k] / d[k + 1];
      if (std::abs(p.eval_derivatives(next)[k]) >= std::abs(d[k])) break;
      c = next;
    }
    out.push_back({c, m});
  }
  return out;
}

inline double max_residual(const Polynomial& p, const std::vector<Cluster>& cl) {
  double r = 0.0;
  for (const auto& c : cl) r = std::max(r, std::abs(p(c.z)));
  return r;
}

inline void sort_entries(std::vector<RootEntry>& entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const RootEntry& a, const RootEntry& b) {
    const double fa = std::abs(a.frequency), fb = std::abs(b.frequency);
    if (std::abs(fa - fb) > 1e-12) return fa < fb;
    if (std::abs(a.modulus - b.modulus) > 1e-12) return a.modulus < b.modulus;
    return a.frequency > b.frequency;
  });
  // Renumber pair ids in order of first appearance.
  int next = 0;
  std::vector<std::pair<int, int>> remap;
  for (auto& e : entries) {
    if (!e.pair_id) continue;
    auto it = std::find_if(remap.begin(), remap.end(), [&](const auto& pr) { return pr.first == *e.pair_id; });
    if (it == remap.end()) {
      remap.emplace_back(*e.pair_id, next);
      e.pair_id = next++;
    } else {
      e.pair_id = it->second;
    }
  }
}

inline RootEntry make_entry(cplx root, int multiplicity) {
  RootEntry e;
  e.root = root;
  e.inverse_root = root.imag() == 0.0 ? cplx(1.0 / root.real(), 0.0) : 1.0 / root;
  if (root.imag() == 0.0) e.inverse_root = cplx(e.inverse_root.real(), 0.0);
  e.modulus = std::abs(e.inverse_root);
  e.frequency = principal_argument(e.inverse_root);
  e.multiplicity = multiplicity;
  return e;
}

}  // namespace detail

/// Builds a RootSet from inverse roots (repeated for multiplicity), pairing
/// conjugates. No root finding is involved.
inline RootSet root_set_from_inverse(std::span<const cplx> inverse_roots) {
  std::vector<cplx> z(inverse_roots.begin(), inverse_roots.end());
  for (const auto& a : z) {
    if (a == cplx(0.0, 0.0)) throw InvalidArgument("inverse root equal to zero");
  }
  const auto groups = detail::pair_conjugates(z, 1e-6);
  // Collapse exact repeats into multiplicity.
  RootSet rs;
  int pair = 0;
  for (const auto& g : groups) {
    const cplx a = z[g[0]];
    auto same = [&](const RootEntry& e) { return std::abs(e.inverse_root - a) <= 1e-12 * (1.0 + std::abs(a)); };
    auto it = std::find_if(rs.entries.begin(), rs.entries.end(), same);
    if (it != rs.entries.end()) {
      it->multiplicity += 1;
      if (g.size() == 2) {
        auto jt = std::find_if(rs.entries.begin(), rs.entries.end(), [&](const RootEntry& e) {
          return std::abs(e.inverse_root - std::conj(a)) <= 1e-12 * (1.0 + std::abs(a));
        });
        jt->multiplicity += 1;
      }
      continue;
    }
    if (g.size() == 1) {
      rs.entries.push_back(detail::make_entry(cplx(1.0 / a.real(), 0.0), 1));
    } else {
      auto e1 = detail::make_entry(1.0 / a, 1);
      auto e2 = detail::make_entry(1.0 / std::conj(a), 1);
      e1.inverse_root = a;
      e2.inverse_root = std::conj(a);
      e1.frequency = principal_argument(a);
      e2.frequency = principal_argument(std::conj(a));
      e1.pair_id = e2.pair_id = pair++;
      rs.entries.push_back(e1);
      rs.entries.push_back(e2);
    }
  }
  detail::sort_entries(rs.entries);
  return rs;
}

/// All roots of p with multiplicity, conjugates paired, sorted by ascending
/// |frequency| then modulus.
///
/// Durand-Kerner iteration from points on the circle of the geometric-mean
/// root radius, restarted from perturbed starts up to five times when the
/// residual test |p(root)| <= 1e-9 * max|c| fails.
inline RootSet poly_roots(const Polynomial& p) {
  if (p.degree() < 1) throw InvalidArgument("poly_roots requires degree >= 1");
  if (p[0] == 0.0) throw InvalidArgument("poly_roots requires a nonzero constant term");
  const double tol = 1e-9 * p.max_abs_coeff();

  // A root of multiplicity m splits by roughly eps^(1/m) under the
  // iteration, so when pairing fails the clustering radius is widened.
  constexpr double kRadii[] = {2e-5, 2e-4, 2e-3};
  std::vector<cplx> z;
  std::vector<int> mult;
  std::vector<std::vector<std::size_t>> groups;
  double residual = 0.0;
  std::string pairing_error;
  CounterRng rng(0x726f6f7473ULL);
  bool ok = false;
  for (int attempt = 0; attempt <= 5 && !ok; ++attempt) {
    const double angle = attempt == 0 ? 0.4 : 2.0 * std::numbers::pi * rng.uniform_open();
    const double scale = attempt == 0 ? 1.0 : 0.5 + rng.uniform_open();
    const auto approx = detail::durand_kerner(p, angle, scale);
    for (double radius : kRadii) {
      const auto clusters = detail::cluster_roots(p, approx, radius);
      residual = detail::max_residual(p, clusters);
      if (!(std::isfinite(residual) && residual <= tol)) continue;
      z.clear();
      mult.clear();
      for (const auto& c : clusters) {
        z.push_back(c.z);
        mult.push_back(c.multiplicity);
      }
      try {
        groups = detail::pair_conjugates(z, 1e-6);
      } catch (const ConjugateViolation& e) {
        pairing_error = e.what();
        continue;
      }
      ok = true;
      break;
    }
  }
  if (!ok && !pairing_error.empty() && residual <= tol) throw ConjugateViolation(pairing_error);
  if (!ok) throw NumericFailure("root finder did not converge", residual);

  RootSet rs;
  int pair = 0;
  for (const auto& g : groups) {
    if (g.size() == 1) {
      rs.entries.push_back(detail::make_entry(z[g[0]], mult[g[0]]));
    } else {
      if (mult[g[0]] != mult[g[1]]) throw ConjugateViolation("conjugate roots with different multiplicities");
      auto e1 = detail::make_entry(z[g[0]], mult[g[0]]);
      auto e2 = detail::make_entry(z[g[1]], mult[g[1]]);
      e2.inverse_root = std::conj(e1.inverse_root);
      e2.frequency = principal_argument(e2.inverse_root);
      e1.pair_id = e2.pair_id = pair++;
      rs.entries.push_back(e1);
      rs.entries.push_back(e2);
    }
  }
  detail::sort_entries(rs.entries);
  return rs;
}

enum class FrequencyKind { zero, nyquist, harmonic, non_seasonal };

inline const char* to_string(FrequencyKind k) {
  switch (k) {
    case FrequencyKind::zero: return "zero";
    case FrequencyKind::nyquist: return "nyquist";
    case FrequencyKind::harmonic: return "harmonic";
    case FrequencyKind::non_seasonal: return "non_seasonal";
  }
  return "?";
}

/// Seasonal classification of a root frequency for period S. For harmonic
/// and non-seasonal labels `harmonic` is the nearest k with 2*pi*k/S.
struct FrequencyLabel {
  FrequencyKind kind = FrequencyKind::zero;
  int harmonic = 0;
  double nearest_frequency = 0.0;
  double distance = 0.0;
};

inline constexpr double kDefaultFrequencyTol = 0.02;

inline FrequencyLabel classify_frequency(double omega, int season, double tol = kDefaultFrequencyTol) {
  if (season < 2) throw InvalidArgument("seasonal period must be >= 2");
  constexpr double pi = std::numbers::pi;
  const double w = std::abs(omega);
  FrequencyLabel out;
  if (w <= tol) {
    out.kind = FrequencyKind::zero;
    out.distance = w;
    return out;
  }
  if (pi - w <= tol) {
    out.kind = FrequencyKind::nyquist;
    out.harmonic = season % 2 == 0 ? season / 2 : 0;
    out.nearest_frequency = pi;
    out.distance = pi - w;
    return out;
  }
  const int kmax = (season - 1) / 2;
  if (kmax == 0) {
    // S = 2 has no harmonic pair; report the nearer boundary frequency.
    out.kind = FrequencyKind::non_seasonal;
    out.harmonic = w < pi / 2 ? 0 : 1;
    out.nearest_frequency = w < pi / 2 ? 0.0 : pi;
    out.distance = std::abs(w - out.nearest_frequency);
    return out;
  }
  int best = 1;
  double best_d = std::abs(w - 2.0 * pi / season);
  for (int k = 2; k <= kmax; ++k) {
    const double d = std::abs(w - 2.0 * pi * k / season);
    if (d < best_d) {
      best = k;
      best_d = d;
    }
  }
  out.harmonic = best;
  out.nearest_frequency = 2.0 * pi * best / season;
  out.distance = best_d;
  out.kind = best_d <= tol ? FrequencyKind::harmonic : FrequencyKind::non_seasonal;
  return out;
}

inline FrequencyLabel classify_root(const RootEntry& entry, int season, double tol = kDefaultFrequencyTol) {
  return classify_frequency(entry.frequency, season, tol);
}

}  // namespace smar
