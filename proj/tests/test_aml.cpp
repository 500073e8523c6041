#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smar/aml.hpp"
#include "smar/presets.hpp"
#include "smar/simulate.hpp"

using namespace smar;
using std::numbers::pi;

namespace {

ParamVector truth(const MarModel& m, const ErrorSpec& e) {
  ParamVector p;
  p.phi = m.phi;
  p.varphi = m.varphi;
  p.intercept = m.intercept;
  p.log_sigma = std::log(e.sigma);
  p.log_nu = std::log(e.nu);
  return p;
}

double sd(const std::vector<double>& x) {
  double m = 0.0, v = 0.0;
  for (double a : x) m += a;
  m /= x.size();
  for (double a : x) v += (a - m) * (a - m);
  return std::sqrt(v / (x.size() - 1));
}

}  // namespace

TEST(NelderMead, Rosenbrock) {
  auto f = [](const std::vector<double>& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); };
  NelderMeadOptions o;
  o.ftol = 1e-14;
  const auto r = nelder_mead(f, {-1.2, 1.0}, o);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
  EXPECT_LE(r.evaluations, o.max_evaluations + 4);
}

TEST(NelderMead, NeverWorseThanStartAndBudget) {
  auto f = [](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += std::abs(std::sin(7 * v)) + 0.01 * v * v;
    return s;
  };
  NelderMeadOptions o;
  o.max_evaluations = 60;
  const std::vector<double> x0{0.3, -2.0, 1.1, 0.7};
  const auto r = nelder_mead(f, x0, o);
  EXPECT_LE(r.f, f(x0));
  EXPECT_LE(r.evaluations, 60 + 5);
  const auto z = nelder_mead(f, {}, o);
  EXPECT_TRUE(z.converged);
}

TEST(Loglik, DensityFitWhenNoPolynomials) {
  const auto y = sample(ErrorSpec::student_t(3.0, 1.0), 200, 1);
  ParamVector p;
  p.log_sigma = std::log(1.3);
  p.log_nu = std::log(4.0);
  double direct = 0.0;
  for (double v : y) direct += log_density(ErrorSpec::student_t(4.0, 1.3), v);
  EXPECT_NEAR(loglik(p, y), direct, 1e-9);
  double c = 0.0;
  for (double v : y) c += log_density(ErrorSpec::cauchy(1.3), v);
  EXPECT_NEAR(loglik(p, y, ErrorFamily::cauchy), c, 1e-9);
}

TEST(Loglik, PenaltyOutsideStationarity) {
  const auto y = sample(ErrorSpec::student_t(3.0, 1.0), 200, 2);
  ParamVector p;
  p.varphi = {1.01};
  const double a = loglik(p, y);
  EXPECT_TRUE(is_penalty(a));
  p.varphi = {1.2};
  const double b = loglik(p, y);
  EXPECT_LT(b, a);  // further outside, worse
  p.varphi = {0.5};
  p.phi = {1.0, 0.2};
  EXPECT_TRUE(is_penalty(loglik(p, y)));
  p.phi = {0.5};
  EXPECT_FALSE(is_penalty(loglik(p, y)));
  p.log_nu = std::log(0.05);
  EXPECT_TRUE(is_penalty(loglik(p, y)));
  EXPECT_FALSE(is_penalty(loglik(p, y, ErrorFamily::cauchy)));  // nu is not a parameter there
}

TEST(Loglik, PenaltyMonotoneInViolation) {
  const auto y = sample(ErrorSpec::student_t(3.0, 1.0), 100, 3);
  double prev = 0.0;
  for (double c : {1.001, 1.05, 1.3, 2.0, 5.0}) {
    ParamVector p;
    p.phi = {c};
    const double v = loglik(p, y);
    if (c > 1.001) {
      EXPECT_LT(v, prev);
    }
    prev = v;
  }
}

TEST(Loglik, ResidualsMatchDirectDoubleLoop) {
  const auto y = sample(ErrorSpec::student_t(3.0, 1.0), 120, 4);
  const std::vector<double> phi{0.4, -0.2}, varphi{0.3, 0.1, -0.05};
  const double m = 0.7;
  const auto e = detail::mar_residuals(y, phi, varphi, m);
  ASSERT_EQ(e.size(), y.size() - 5);
  const std::vector<double> c{1.0, -0.4, 0.2}, d{1.0, -0.3, -0.1, 0.05};
  for (std::size_t t = 2; t + 3 < y.size(); ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j) s += c[i] * d[j] * (y[t - i + j] - m);
    ASSERT_NEAR(e[t - 2], s, 1e-12);
  }
}

TEST(Loglik, PeaksNearTruth) {
  const auto pr = find_preset("root-recovery");
  int ok = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto y = simulate_mar(pr.model, pr.error, 2000, -1, 100 + s);
    auto th = truth(pr.model, pr.error);
    const double l0 = loglik(th, y.values);
    bool better = true;
    for (double d : {-0.2, 0.2}) {
      auto p = th;
      p.phi[0] += d;
      better = better && l0 > loglik(p, y.values);
    }
    ok += better;
  }
  EXPECT_GE(ok, 95);
}

TEST(FitAml, NoncausalPairRecovered) {
  const auto pr = find_preset("selection-07");
  const auto y = simulate_mar(pr.model, pr.error, 1000, -1, 77).values;
  AmlOptions o;
  const auto noncausal = fit_aml(y, 0, 2, {make_start(y, {}, {-1.0, -0.3}, 0.0)}, o);
  const auto causal = fit_aml(y, 2, 0, {make_start(y, {-1.0, -0.3}, {}, 0.0)}, o);
  EXPECT_NEAR(noncausal.model.varphi[0], -1.212, 0.05);
  EXPECT_NEAR(noncausal.model.varphi[1], -0.49, 0.05);
  EXPECT_GT(noncausal.loglik, causal.loglik);
  EXPECT_EQ(noncausal.residuals.size(), y.size() - 2);
  double ll = 0.0;
  for (double e : noncausal.residuals) ll += log_density(noncausal.error, e);
  EXPECT_NEAR(ll, noncausal.loglik, 1e-6 * std::abs(ll));
  EXPECT_EQ(noncausal.param_names, (std::vector<std::string>{"varphi1", "varphi2", "intercept", "sigma", "nu"}));
}

TEST(FitAml, DensityFitConsistency) {
  int ok = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto y = sample(ErrorSpec::student_t(3.0, 1.0), 5000, 300 + s);
    AmlOptions o;
    o.estimate_intercept = false;
    const auto r = fit_aml(y, 0, 0, {make_start(y, {}, {}, 0.0)}, o);
    ok += r.error.nu >= 2.5 && r.error.nu <= 3.6 && r.error.sigma >= 0.93 && r.error.sigma <= 1.07;
  }
  EXPECT_GE(ok, 95);
}

TEST(FitAml, StartAtTruthAscends) {
  const auto pr = find_preset("mar-a");
  const auto y = simulate_mar(pr.model, pr.error, 1000, -1, 5).values;
  const auto th = truth(pr.model, pr.error);
  const auto r = fit_aml(y, 1, 1, {th});
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.loglik, loglik(th, y));
  EXPECT_EQ(r.start_index, 0u);
}

TEST(FitAml, BestStartWinsAndInfeasibleSkipped) {
  const auto pr = find_preset("mar-a");
  const auto y = simulate_mar(pr.model, pr.error, 800, -1, 6).values;
  auto bad = truth(pr.model, pr.error);
  bad.phi = {1.5};
  const auto good = truth(pr.model, pr.error);
  const auto r = fit_aml(y, 1, 1, {bad, good});
  EXPECT_EQ(r.start_index, 1u);
  EXPECT_THROW(fit_aml(y, 1, 1, {bad}), NoFeasibleStart);
  EXPECT_THROW(fit_aml(y, 1, 1, {}), InvalidArgument);
  EXPECT_THROW(fit_aml(y, 2, 1, {good}), InvalidArgument);
  // Duplicating the start changes nothing.
  const auto once = fit_aml(y, 1, 1, {good});
  const auto twice = fit_aml(y, 1, 1, {good, good});
  EXPECT_EQ(once.estimates, twice.estimates);
  EXPECT_EQ(twice.start_index, 0u);
}

TEST(FitAml, TimeReversalSymmetry) {
  const auto y = simulate_mar(MarModel{{0.6}, {}, 0.0}, ErrorSpec::student_t(3.0, 1.0), 1000, -1, 8).values;
  std::vector<double> rev(y.rbegin(), y.rend());
  AmlOptions o;
  const auto a = fit_aml(y, 1, 0, {make_start(y, {0.3}, {}, 0.0)}, o);
  const auto b = fit_aml(rev, 0, 1, {make_start(rev, {}, {0.3}, 0.0)}, o);
  ASSERT_EQ(a.estimates.size(), b.estimates.size());
  for (std::size_t i = 0; i < a.estimates.size(); ++i) EXPECT_NEAR(a.estimates[i], b.estimates[i], 1e-8);
  EXPECT_NEAR(a.loglik, b.loglik, 1e-8);
}

TEST(FitAml, InfiniteVarianceWarningAndCauchyFamily) {
  const auto y = sample(ErrorSpec::cauchy(1.0), 2000, 9);
  AmlOptions o;
  o.estimate_intercept = false;
  const auto t = fit_aml(y, 0, 0, {make_start(y, {}, {}, 0.0)}, o);
  EXPECT_LT(t.error.nu, 2.0);
  EXPECT_FALSE(t.warnings.empty());
  o.family = ErrorFamily::cauchy;
  const auto c = fit_aml(y, 0, 0, {make_start(y, {}, {}, 0.0)}, o);
  EXPECT_EQ(c.param_names, std::vector<std::string>{"sigma"});
  EXPECT_NEAR(c.error.sigma, 1.0, 0.1);
  EXPECT_EQ(c.error.family, ErrorFamily::cauchy);
}

TEST(StandardErrors, CalibratedAgainstMonteCarlo) {
  const MarModel m{{0.5}, {}, 0.0};
  const auto e = ErrorSpec::student_t(3.0, 1.0);
  AmlOptions o;
  o.estimate_intercept = false;
  std::vector<double> est, se;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto y = simulate_mar(m, e, 10000, -1, 900 + s).values;
    auto r = fit_aml(y, 1, 0, {make_start(y, {0.4}, {}, 0.0)}, o);
    est.push_back(r.estimates[0]);
    if (s < 20) {
      const auto v = standard_errors(r, y, o);
      ASSERT_TRUE(v[0].has_value());
      se.push_back(*v[0]);
    }
  }
  double mean_se = 0.0;
  for (double v : se) mean_se += v / se.size();
  const double mc = sd(est);
  EXPECT_GT(mean_se / mc, 1.0 / 1.5);
  EXPECT_LT(mean_se / mc, 1.5);
}

TEST(StandardErrors, RootTRate) {
  const MarModel m{{0.5}, {}, 0.0};
  const auto e = ErrorSpec::student_t(3.0, 1.0);
  AmlOptions o;
  o.estimate_intercept = false;
  const auto y = simulate_mar(m, e, 8000, -1, 17).values;
  const std::vector<double> y1(y.begin(), y.begin() + 2000);
  const auto r1 = fit_aml(y1, 1, 0, {make_start(y1, {0.4}, {}, 0.0)}, o);
  const auto r4 = fit_aml(y, 1, 0, {make_start(y, {0.4}, {}, 0.0)}, o);
  const auto s1 = standard_errors(r1, y1, o), s4 = standard_errors(r4, y, o);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    ASSERT_TRUE(s1[i] && s4[i]);
    EXPECT_GT(*s4[i] / *s1[i], 0.4) << r1.param_names[i];
    EXPECT_LT(*s4[i] / *s1[i], 0.6) << r1.param_names[i];
  }
}

TEST(StandardErrors, UndefinedAtPenaltyBoundary) {
  const auto y = simulate_mar(MarModel{{0.5}, {}, 0.0}, ErrorSpec::student_t(3.0, 1.0), 500, -1, 3).values;
  AmlOptions o;
  o.estimate_intercept = false;
  auto r = fit_aml(y, 1, 0, {make_start(y, {0.4}, {}, 0.0)}, o);
  r.model.phi[0] = 0.99995;
  r.estimates[0] = 0.99995;
  const auto se = standard_errors(r, y, o);
  EXPECT_FALSE(se[0].has_value());
}
