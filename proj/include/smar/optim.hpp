#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace smar {

struct NelderMeadOptions {
  double ftol = 1e-8;        // stop when max f - min f over the simplex falls below this
  double xtol = 1e-10;       // or when the simplex collapses
  int max_evaluations = 5000;
  int restarts = 1;          // fresh simplexes around the best point after convergence
  double initial_step = 0.1;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f with the adaptive-coefficient simplex method (coefficients
/// scaled with the dimension). Never returns a point worse than x0.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  NelderMeadResult res;
  res.x = x0;
  res.f = f(x0);
  res.evaluations = 1;
  if (n == 0) {
    res.converged = true;
    return res;
  }
  const double dn = static_cast<double>(n);
  const double alpha = 1.0, beta = 1.0 + 2.0 / dn, gamma = 0.75 - 0.5 / dn, delta = 1.0 - 1.0 / dn;

  std::vector<std::vector<double>> s(n + 1);
  std::vector<double> fs(n + 1);
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  for (int round = 0; round <= opt.restarts; ++round) {
    s[0] = res.x;
    fs[0] = res.f;
    for (std::size_t i = 0; i < n; ++i) {
      s[i + 1] = res.x;
      s[i + 1][i] += opt.initial_step * std::max(1.0, std::abs(res.x[i]));
      fs[i + 1] = eval(s[i + 1]);
    }
    std::vector<std::size_t> idx(n + 1);
    bool conv = false;
    while (res.evaluations < opt.max_evaluations) {
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
      const std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];
      double xspread = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j < n; ++j) xspread = std::max(xspread, std::abs(s[i][j] - s[best][j]));
      }
      if ((std::isfinite(fs[worst]) && fs[worst] - fs[best] <= opt.ftol) || xspread <= opt.xtol) {
        conv = true;
        break;
      }
      ++res.iterations;
      std::vector<double> c(n, 0.0);
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == worst) continue;
        for (std::size_t j = 0; j < n; ++j) c[j] += s[i][j] / dn;
      }
      auto along = [&](double t) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = c[j] + t * (s[worst][j] - c[j]);
        return x;
      };
      auto xr = along(-alpha);
      const double fr = eval(xr);
      if (fr < fs[best]) {
        auto xe = along(-alpha * beta);
        const double fe = eval(xe);
        if (fe < fr) {
          s[worst] = std::move(xe);
          fs[worst] = fe;
        } else {
          s[worst] = std::move(xr);
          fs[worst] = fr;
        }
        continue;
      }
      if (fr < fs[second]) {
        s[worst] = std::move(xr);
        fs[worst] = fr;
        continue;
      }
      const bool outside = fr < fs[worst];
      auto xc = along(outside ? -alpha * gamma : gamma);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fs[worst])) {
        s[worst] = std::move(xc);
        fs[worst] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == best) continue;
        for (std::size_t j = 0; j < n; ++j) s[i][j] = s[best][j] + delta * (s[i][j] - s[best][j]);
        fs[i] = eval(s[i]);
      }
    }
    const auto bi = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
    const bool improved = fs[bi] < res.f;
    if (improved) {
      res.x = s[bi];
      res.f = fs[bi];
    }
    res.converged = res.converged || conv;
    if (!conv || res.evaluations >= opt.max_evaluations) break;
  }
  return res;
}

}  // namespace smar
