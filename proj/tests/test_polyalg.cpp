#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "smar/model.hpp"
#include "smar/partial_fraction.hpp"
#include "smar/polynomial.hpp"
#include "smar/roots.hpp"

using namespace smar;
using std::numbers::pi;

namespace {

void expect_coeffs(const Polynomial& p, std::vector<double> want, double tol = 1e-12) {
  ASSERT_EQ(p.coeffs().size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(p.coeffs()[i], want[i], tol) << "coefficient " << i;
}

// Random stationary inverse-root multiset of the given degree, closed
// under conjugation. With `repeat` one real root is doubled.
std::vector<cplx> random_inverse_roots(std::mt19937_64& gen, int degree, bool repeat = false) {
  std::uniform_real_distribution<double> mod(0.05, 0.92), ang(0.15, pi - 0.15), coin(0.0, 1.0);
  std::vector<cplx> out;
  if (repeat && degree >= 2) {
    const double a = (coin(gen) < 0.5 ? -1.0 : 1.0) * mod(gen);
    out.push_back(a);
    out.push_back(a);
  }
  while (static_cast<int>(out.size()) < degree) {
    if (degree - static_cast<int>(out.size()) >= 2 && coin(gen) < 0.5) {
      const auto z = std::polar(mod(gen), ang(gen));
      out.push_back(z);
      out.push_back(std::conj(z));
    } else {
      out.push_back((coin(gen) < 0.5 ? -1.0 : 1.0) * mod(gen));
    }
  }
  return out;
}

}  // namespace

TEST(Polynomial, TrimsTrailingZerosAndRejectsZero) {
  Polynomial p({1.0, 2.0, 0.0, 0.0});
  EXPECT_EQ(p.degree(), 1);
  EXPECT_THROW(Polynomial({0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(Polynomial({1.0, NAN}), InvalidArgument);
}

TEST(Polynomial, ArCoefficientsRoundTrip) {
  const std::vector<double> a{0.3, -0.2, 0.1};
  EXPECT_EQ(Polynomial::from_ar(a).ar_coefficients(), a);
  EXPECT_EQ(Polynomial::from_ar(a).ar_coefficients(5), (std::vector<double>{0.3, -0.2, 0.1, 0.0, 0.0}));
}

TEST(Polynomial, DerivativesMatchFiniteDifferences) {
  Polynomial p({1.0, -0.4, 0.3, 0.25});
  const double z = 0.7, h = 1e-5;
  const auto d = p.eval_derivatives(z);
  EXPECT_NEAR(d[0], p(z), 1e-14);
  EXPECT_NEAR(d[1], (p(z + h) - p(z - h)) / (2 * h), 1e-8);
  EXPECT_NEAR(d[2], (p(z + h) - 2 * p(z) + p(z - h)) / (h * h), 1e-4);
}

TEST(PolyFromRoots, RealPair) {
  const std::vector<cplx> a{0.4, -0.7};
  expect_coeffs(poly_from_roots(a), {1.0, 0.3, -0.28});
}

TEST(PolyFromRoots, EmptyIsOne) {
  expect_coeffs(poly_from_roots(std::vector<cplx>{}), {1.0});
}

TEST(PolyFromRoots, ConjugatePairAtTwoThirdsPi) {
  const auto z = std::polar(0.9, 2 * pi / 3);
  const std::vector<cplx> a{z, std::conj(z)};
  // 1 - 2 rho cos(w) z + rho^2 z^2
  expect_coeffs(poly_from_roots(a), {1.0, -2 * 0.9 * std::cos(2 * pi / 3), 0.81});
  expect_coeffs(poly_from_roots(a), {1.0, 0.9, 0.81});
}

TEST(PolyFromRoots, RejectsUnpairedAndZero) {
  EXPECT_THROW(poly_from_roots(std::vector<cplx>{cplx(0.3, 0.4)}), ConjugateViolation);
  EXPECT_THROW(poly_from_roots(std::vector<cplx>{cplx(0.3, 0.4), cplx(0.3, -0.5)}), ConjugateViolation);
  EXPECT_THROW(poly_from_roots(std::vector<cplx>{0.0}), InvalidArgument);
}

TEST(PolyRoots, ConjugatePairOfQuadratic) {
  const auto rs = poly_roots(Polynomial({1.0, 0.9, 0.81}));
  ASSERT_EQ(rs.entries.size(), 2u);
  for (const auto& e : rs.entries) {
    EXPECT_NEAR(e.root.real(), -0.556, 1e-3);
    EXPECT_NEAR(std::abs(e.root.imag()), 0.962, 1e-3);
    EXPECT_NEAR(e.modulus, 0.9, 1e-12);
    EXPECT_NEAR(std::cos(e.frequency), -0.5, 1e-9);
    ASSERT_TRUE(e.pair_id.has_value());
  }
  EXPECT_EQ(rs.entries[0].pair_id, rs.entries[1].pair_id);
  EXPECT_NEAR(rs.entries[0].frequency, -rs.entries[1].frequency, 1e-14);
  EXPECT_EQ(rs.entries[0].root, std::conj(rs.entries[1].root));
}

TEST(PolyRoots, Linear) {
  const auto rs = poly_roots(Polynomial({1.0, -0.5}));
  ASSERT_EQ(rs.entries.size(), 1u);
  EXPECT_NEAR(rs.entries[0].root.real(), 2.0, 1e-14);
  EXPECT_EQ(rs.entries[0].root.imag(), 0.0);
  EXPECT_NEAR(rs.entries[0].inverse_root.real(), 0.5, 1e-14);
  EXPECT_EQ(rs.entries[0].frequency, 0.0);
  EXPECT_FALSE(rs.entries[0].pair_id.has_value());
}

TEST(PolyRoots, ModulusSevenPair) {
  const auto rs = poly_roots(Polynomial({1.0, 1.212, 0.49}));
  ASSERT_EQ(rs.entries.size(), 2u);
  for (const auto& e : rs.entries) {
    EXPECT_NEAR(e.root.real(), -1.237, 1e-3);
    // Exact value is 0.7150 for the rounded coefficients; 0.714 is the
    // value at exactly 5pi/6.
    EXPECT_NEAR(std::abs(e.root.imag()), 0.714, 1.5e-3);
    EXPECT_NEAR(e.modulus, 0.7, 1e-12);
    EXPECT_NEAR(std::abs(e.frequency), 5 * pi / 6, 2e-3);
  }
}

TEST(PolyRoots, ResidualAndDegree) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 8;
    const auto inv = random_inverse_roots(gen, d, trial % 5 == 0);
    const auto p = poly_from_roots(inv);
    const auto rs = poly_roots(p);
    EXPECT_EQ(rs.degree(), p.degree());
    for (const auto& e : rs.entries) {
      EXPECT_LE(std::abs(p(e.root)), 1e-9 * p.max_abs_coeff());
      EXPECT_NEAR(std::abs(e.inverse_root * e.root - 1.0), 0.0, 1e-14);
    }
  }
}

TEST(PolyRoots, DetectsDoubleRoot) {
  const std::vector<cplx> inv{0.5, 0.5, -0.25};
  const auto rs = poly_roots(poly_from_roots(inv));
  ASSERT_EQ(rs.entries.size(), 2u);
  int doubled = 0;
  for (const auto& e : rs.entries) {
    if (e.multiplicity == 2) {
      ++doubled;
      EXPECT_NEAR(e.inverse_root.real(), 0.5, 1e-10);
    }
  }
  EXPECT_EQ(doubled, 1);
}

TEST(PolyRoots, HigherMultiplicity) {
  const std::vector<cplx> inv{0.5, 0.5, 0.5, 0.5};
  const auto rs = poly_roots(poly_from_roots(inv));
  ASSERT_EQ(rs.entries.size(), 1u);
  EXPECT_EQ(rs.entries[0].multiplicity, 4);
  const auto z = std::polar(0.9, std::numbers::pi / 2);
  const std::vector<cplx> pair2{z, std::conj(z), z, std::conj(z)};
  const auto rp = poly_roots(poly_from_roots(pair2));
  ASSERT_EQ(rp.entries.size(), 2u);
  EXPECT_EQ(rp.entries[0].multiplicity, 2);
  EXPECT_NEAR(rp.entries[0].modulus, 0.9, 1e-10);
}

TEST(PolyRoots, RejectsConstant) {
  EXPECT_THROW(poly_roots(Polynomial({1.0})), InvalidArgument);
}

TEST(PolyRoots, RoundTripProperty) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + trial % 6;
    auto want = random_inverse_roots(gen, d);
    const auto got = poly_roots(poly_from_roots(want)).inverse_roots();
    ASSERT_EQ(got.size(), want.size());
    // Match greedily; ordering is not part of the contract here.
    std::vector<bool> used(got.size(), false);
    for (const auto& w : want) {
      double best = 1e300;
      std::size_t bi = 0;
      for (std::size_t i = 0; i < got.size(); ++i) {
        if (!used[i] && std::abs(got[i] - w) < best) {
          best = std::abs(got[i] - w);
          bi = i;
        }
      }
      used[bi] = true;
      EXPECT_LT(best, 1e-8) << "trial " << trial;
    }
  }
}

TEST(PrincipalArgument, Examples) {
  EXPECT_EQ(principal_argument(1.0, 0.0), 0.0);
  EXPECT_EQ(principal_argument(-1.0, 0.0), pi);
  EXPECT_EQ(principal_argument(-1.0, -0.0), pi);
  EXPECT_NEAR(principal_argument(-0.450, 0.779), 2 * pi / 3, 1e-3);
  EXPECT_NEAR(principal_argument(-0.45, -0.45 * std::sqrt(3.0)), -2 * pi / 3, 1e-14);
  EXPECT_THROW(principal_argument(0.0, 0.0), DomainError);
}

TEST(ClassifyRoot, Examples) {
  auto l = classify_frequency(2.094, 6);
  EXPECT_EQ(l.kind, FrequencyKind::harmonic);
  EXPECT_EQ(l.harmonic, 2);
  EXPECT_NEAR(l.nearest_frequency, 2 * pi / 3, 1e-15);

  EXPECT_EQ(classify_frequency(pi, 12).kind, FrequencyKind::nyquist);
  EXPECT_EQ(classify_frequency(0.0, 12).kind, FrequencyKind::zero);

  l = classify_frequency(0.768, 12);
  EXPECT_EQ(l.kind, FrequencyKind::non_seasonal);
  EXPECT_TRUE(l.harmonic == 1 || l.harmonic == 2);
  EXPECT_GT(l.distance, kDefaultFrequencyTol);

  EXPECT_THROW(classify_frequency(1.0, 1), InvalidArgument);
}

TEST(ClassifyRoot, TolerenceIsConfigurable) {
  EXPECT_EQ(classify_frequency(0.768, 12, 0.3).kind, FrequencyKind::harmonic);
}

TEST(ClassifyRoot, ConjugatesShareLabel) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rs = poly_roots(poly_from_roots(random_inverse_roots(gen, 4)));
    for (int s : {2, 4, 6, 7, 12}) {
      for (const auto& a : rs.entries) {
        for (const auto& b : rs.entries) {
          if (&a == &b || !a.pair_id || a.pair_id != b.pair_id) continue;
          const auto la = classify_root(a, s), lb = classify_root(b, s);
          EXPECT_EQ(la.kind, lb.kind);
          EXPECT_EQ(la.harmonic, lb.harmonic);
        }
      }
    }
  }
}

TEST(PartialFractions, TwoRealCausalPoles) {
  const auto pf = partial_fractions(Polynomial({1.0, -0.5}) * Polynomial({1.0, 0.3}), Polynomial());
  ASSERT_EQ(pf.terms.size(), 2u);
  for (const auto& t : pf.terms) {
    EXPECT_EQ(t.direction, Direction::lag);
    EXPECT_EQ(t.power, 1);
    EXPECT_EQ(t.lag_shift, 0);
    if (t.frequency == 0.0) {
      EXPECT_NEAR(t.modulus, 0.5, 1e-14);
      EXPECT_NEAR(t.numerator.real(), 0.5 / (0.5 + 0.3), 1e-13);
    } else {
      EXPECT_NEAR(t.frequency, pi, 1e-14);
      EXPECT_NEAR(t.modulus, 0.3, 1e-14);
      EXPECT_NEAR(t.numerator.real(), 0.3 / (0.5 + 0.3), 1e-13);
    }
  }
}

TEST(PartialFractions, DoublePoleCoefficients) {
  const double a = 0.5, b = 0.25;
  const auto causal = Polynomial({1.0, -a}) * Polynomial({1.0, -a}) * Polynomial({1.0, -b});
  const auto pf = partial_fractions(causal, Polynomial());
  const double d1 = 1.0 / (1.0 - b / a);
  const double d2 = b / (-a * (1.0 - b / a) * (1.0 - b / a));
  const double d3 = 1.0 / ((1.0 - a / b) * (1.0 - a / b));
  EXPECT_DOUBLE_EQ(d1, 2.0);
  EXPECT_DOUBLE_EQ(d2, -2.0);
  EXPECT_DOUBLE_EQ(d3, 1.0);
  int seen = 0;
  for (const auto& t : pf.terms) {
    if (std::abs(t.pole.real() - a) < 1e-9 && t.power == 2) {
      EXPECT_NEAR(t.numerator.real(), d1, 1e-7);
      ++seen;
    } else if (std::abs(t.pole.real() - a) < 1e-9) {
      EXPECT_NEAR(t.numerator.real(), d2, 1e-7);
      ++seen;
    } else {
      EXPECT_NEAR(t.pole.real(), b, 1e-12);
      EXPECT_NEAR(t.numerator.real(), d3, 1e-7);
      ++seen;
    }
  }
  EXPECT_EQ(seen, 3);
  // Series oracle to lag 30.
  MarModel m;
  m.phi = causal.ar_coefficients();
  const auto want = two_sided_ma(m, -30, 0);
  const auto got = expand(pf, -30, 0);
  for (int j = -30; j <= 0; ++j) EXPECT_NEAR(got.at(j), want.at(j), 1e-10) << j;
}

TEST(PartialFractions, MixedFirstOrder) {
  const auto pf = partial_fractions(Polynomial({1.0, -0.5}), Polynomial({1.0, 0.7}));
  ASSERT_EQ(pf.terms.size(), 2u);
  for (const auto& t : pf.terms) {
    EXPECT_NEAR(t.numerator.real(), 1.0 / 1.35, 1e-14);
    if (t.direction == Direction::lag) {
      EXPECT_EQ(t.lag_shift, 1);
      EXPECT_NEAR(t.pole.real(), 0.5, 1e-14);
    } else {
      EXPECT_EQ(t.lag_shift, 0);
      EXPECT_NEAR(t.pole.real(), -0.7, 1e-14);
    }
  }
}

TEST(PartialFractions, Errors) {
  EXPECT_THROW(partial_fractions(Polynomial({1.0, -1.2}), Polynomial()), NonStationary);
  EXPECT_THROW(partial_fractions(Polynomial(), Polynomial({1.0, -1.0})), NonStationary);
  const std::vector<cplx> triple{0.5, 0.5, 0.5};
  EXPECT_THROW(partial_fractions(Polynomial({1.0, -0.25}) * poly_from_roots(triple), Polynomial()),
               UnsupportedMultiplicity);
  // Degeneracy needs ab = 1, impossible under stationarity; build the sets directly.
  RootSet c, n;
  c.entries.push_back(detail::make_entry(cplx(2.0, 0.0), 1));
  n.entries.push_back(detail::make_entry(cplx(2.0, 0.0), 1));
  n.entries[0].inverse_root = 2.0;  // modulus left at 0.5 to pass the stationarity guard
  EXPECT_THROW(partial_fractions(c, n), Degeneracy);
}

TEST(PartialFractions, OracleAgainstSeriesInversion) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 500; ++trial) {
    const int dc = static_cast<int>(gen() % 4), dn = static_cast<int>(gen() % 4);
    const bool repeat = trial % 7 == 0;
    const auto ci = random_inverse_roots(gen, dc, repeat);
    const auto ni = random_inverse_roots(gen, dn, repeat && trial % 2 == 0);
    const auto cpoly = poly_from_roots(ci), npoly = poly_from_roots(ni);
    MarModel m;
    m.phi = cpoly.ar_coefficients();
    m.varphi = npoly.ar_coefficients();
    const auto want = two_sided_ma(m, -40, 40);
    const auto got = expand(partial_fractions(cpoly, npoly), -40, 40);
    for (int j = -40; j <= 40; ++j) ASSERT_NEAR(got.at(j), want.at(j), 1e-8) << "trial " << trial << " j " << j;
  }
}

TEST(PartialFractions, ZeroFrequencyRootsStayAtZeroFrequency) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cplx> c, n;
    for (int i = 0; i < 1 + trial % 3; ++i) c.push_back(u(gen));
    for (int i = 0; i < 1 + trial % 2; ++i) n.push_back(u(gen));
    for (const auto& t : partial_fractions(poly_from_roots(c), poly_from_roots(n)).terms) {
      EXPECT_EQ(t.frequency, 0.0);
    }
  }
}

TEST(PartialFractions, ComplexNumeratorsComeInConjugatePairs) {
  const auto z = std::polar(0.8, 1.1);
  const std::vector<cplx> c{z, std::conj(z)};
  const auto pf = partial_fractions(poly_from_roots(c), Polynomial({1.0, -0.4}));
  for (const auto& t : pf.terms) {
    if (t.numerator.imag() == 0.0) continue;
    const auto match = std::count_if(pf.terms.begin(), pf.terms.end(), [&](const PartialFractionTerm& u) {
      return u.direction == t.direction && u.power == t.power && u.lag_shift == t.lag_shift &&
             std::abs(u.numerator - std::conj(t.numerator)) < 1e-12 && std::abs(u.pole - std::conj(t.pole)) < 1e-12;
    });
    EXPECT_EQ(match, 1);
  }
}

TEST(TwoSidedMa, MixedFirstOrder) {
  MarModel m{{0.5}, {-0.7}, 0.0};
  const auto xi = two_sided_ma(m, -5, 5);
  EXPECT_NEAR(xi.at(0), 1 / 1.35, 1e-14);
  EXPECT_NEAR(xi.at(-1), 0.5 / 1.35, 1e-14);
  EXPECT_NEAR(xi.at(1), -0.7 / 1.35, 1e-14);
}

TEST(TwoSidedMa, CausalAndIdentity) {
  const auto xi = two_sided_ma(MarModel{{0.5}, {}, 0.0}, -10, 3);
  for (int j = 0; j <= 10; ++j) EXPECT_NEAR(xi.at(-j), std::pow(0.5, j), 1e-15);
  for (int j = 1; j <= 3; ++j) EXPECT_EQ(xi.at(j), 0.0);
  const auto id = two_sided_ma(MarModel{}, -3, 3);
  for (int j = -3; j <= 3; ++j) EXPECT_EQ(id.at(j), j == 0 ? 1.0 : 0.0);
}

TEST(TwoSidedMa, SatisfiesDefiningRecursion) {
  MarModel m{{0.3, -0.2}, {0.6}, 0.0};
  const auto xi = two_sided_ma(m, -60, 60);
  // phi(L) varphi(F) applied to sum xi_j F^j must give the identity.
  const auto c = m.causal_polynomial(), n = m.noncausal_polynomial();
  for (int k = -20; k <= 20; ++k) {
    double s = 0.0;
    for (int i = 0; i <= c.degree(); ++i) {
      for (int l = 0; l <= n.degree(); ++l) s += c[i] * n[l] * xi.at(k + i - l);
    }
    EXPECT_NEAR(s, k == 0 ? 1.0 : 0.0, 1e-12) << k;
  }
  EXPECT_THROW(two_sided_ma(MarModel{{1.1}, {}, 0.0}, -1, 1), NonStationary);
}

TEST(Stationarity, StepDownAgreesWithRoots) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(1 + trial % 4);
    for (auto& v : a) v = u(gen);
    const auto rs = poly_roots(Polynomial::from_ar(a));
    if (std::abs(rs.max_modulus() - 1.0) < 1e-9) continue;
    EXPECT_EQ(is_stationary_ar(a), rs.max_modulus() < 1.0);
  }
}

TEST(ExpandSmar, Examples) {
  SmarSpec s;
  s.season = 4;
  s.Phi = {0.5};
  auto m = expand_smar(s);
  EXPECT_EQ(m.r(), 4);
  EXPECT_EQ(m.q(), 0);
  expect_coeffs(m.causal_polynomial(), {1.0, 0.0, 0.0, 0.0, -0.5});

  s = SmarSpec{};
  s.season = 2;
  s.phi = {0.3};
  s.Phi = {0.4};
  m = expand_smar(s);
  EXPECT_EQ(m.r(), 3);
  expect_coeffs(m.causal_polynomial(), {1.0, -0.3, -0.4, 0.12});

  s = SmarSpec{};
  s.season = 2;
  s.varphi = {0.3};
  s.Psi = {0.4};
  m = expand_smar(s);
  EXPECT_EQ(m.q(), 3);
  EXPECT_EQ(m.r(), 0);
  expect_coeffs(m.noncausal_polynomial(), {1.0, -0.3, -0.4, 0.12});

  s.Psi = {1.2};
  EXPECT_THROW(expand_smar(s), NonStationary);
}

TEST(ExpandSmar, DegreeProperty) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int trial = 0; trial < 50; ++trial) {
    SmarSpec s;
    s.season = 2 + trial % 11;
    auto fill = [&](std::vector<double>& v, int n) {
      v.resize(n);
      for (auto& x : v) x = u(gen) / n;
    };
    const int r = trial % 3, q = (trial / 3) % 3, R = trial % 2, Q = (trial / 2) % 2;
    fill(s.phi, r);
    fill(s.varphi, q);
    fill(s.Phi, R);
    fill(s.Psi, Q);
    const auto m = expand_smar(s);
    EXPECT_EQ(m.r(), R * s.season + r);
    EXPECT_EQ(m.q(), Q * s.season + q);
    EXPECT_EQ(m.causal_polynomial().degree(), R * s.season + r);
  }
}
