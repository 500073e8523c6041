#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <fftw3.h>

#include "smar/error.hpp"

namespace smar {

namespace detail {

inline std::vector<double> demeaned(std::span<const double> y) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] - mean;
  return out;
}

// FFTW planning touches global state; execution on distinct arrays does not.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

/// Sample autocorrelations r_0..r_max_lag (r_0 = 1), mean removed, with the
/// usual 1/T autocovariance normalization.
inline std::vector<double> acf(std::span<const double> y, int max_lag) {
  if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= y.size()) {
    throw InvalidArgument("acf lag must be in [0, length)");
  }
  const auto x = detail::demeaned(y);
  double c0 = 0.0;
  for (double v : x) c0 += v * v;
  if (!(c0 > 0.0)) throw DegenerateInput("autocorrelation of a constant series is undefined");
  std::vector<double> r(static_cast<std::size_t>(max_lag) + 1);
  r[0] = 1.0;
  for (int k = 1; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::size_t t = static_cast<std::size_t>(k); t < x.size(); ++t) s += x[t] * x[t - k];
    r[static_cast<std::size_t>(k)] = s / c0;
  }
  return r;
}

/// Partial autocorrelations at lags 1..max_lag via Durbin-Levinson.
inline std::vector<double> pacf(std::span<const double> y, int max_lag) {
  if (max_lag < 1) throw InvalidArgument("pacf lag must be >= 1");
  const auto r = acf(y, max_lag);
  std::vector<double> out(static_cast<std::size_t>(max_lag));
  std::vector<double> phi, prev;
  double v = 1.0;
  for (int k = 1; k <= max_lag; ++k) {
    double num = r[static_cast<std::size_t>(k)];
    for (int j = 1; j < k; ++j) num -= prev[j - 1] * r[static_cast<std::size_t>(k - j)];
    const double kk = v > 0.0 ? num / v : 0.0;
    phi.assign(static_cast<std::size_t>(k), 0.0);
    for (int j = 1; j < k; ++j) phi[j - 1] = prev[j - 1] - kk * prev[k - j - 1];
    phi[k - 1] = kk;
    v *= (1.0 - kk * kk);
    out[static_cast<std::size_t>(k - 1)] = kk;
    prev = phi;
  }
  return out;
}

enum class Normalization { raw, self_normalized };

inline const char* to_string(Normalization n) { return n == Normalization::raw ? "raw" : "self_normalized"; }

struct Spectrum {
  std::vector<double> frequencies;  // 2 pi j / T, j = 1..floor(T/2)
  std::vector<double> power;
  Normalization normalization = Normalization::raw;
  int span = 0;  // 0 when unsmoothed
  std::size_t length = 0;

  std::size_t size() const noexcept { return power.size(); }
};

/// Periodogram on the positive Fourier frequencies of the de-meaned series:
/// |sum y_t e^{-i t w}|^2 scaled by 1/T (raw) or by 1/sum y_t^2.
inline Spectrum periodogram(std::span<const double> y, Normalization norm) {
  if (y.size() < 8) throw InvalidArgument("periodogram requires at least 8 observations");
  auto x = detail::demeaned(y);
  double ss = 0.0;
  for (double v : x) ss += v * v;
  if (!(ss > 0.0)) throw DegenerateInput("periodogram of a constant or all-zero series");
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, x.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  Spectrum s;
  s.normalization = norm;
  s.length = x.size();
  const double scale = norm == Normalization::raw ? 1.0 / n : 1.0 / ss;
  for (int j = 1; j <= n / 2; ++j) {
    s.frequencies.push_back(2.0 * std::numbers::pi * j / n);
    s.power.push_back(std::norm(out[static_cast<std::size_t>(j)]) * scale);
  }
  return s;
}

/// Largest odd number <= sqrt(T)/2, at least 3.
inline int default_smoothing_span(std::size_t T) {
  int s = static_cast<int>(std::floor(std::sqrt(static_cast<double>(T)) / 2.0));
  if (s % 2 == 0) --s;
  return std::max(3, s);
}

/// Daniell (centred moving average) smoother, reflecting at both ends.
inline Spectrum smooth(const Spectrum& s, int span) {
  if (span < 3 || span % 2 == 0) throw InvalidArgument("smoothing span must be odd and >= 3");
  const int n = static_cast<int>(s.size());
  if (span >= n) throw InvalidArgument("smoothing span must be smaller than the frequency grid");
  const int h = span / 2;
  auto at = [&](int i) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
    return s.power[static_cast<std::size_t>(i)];
  };
  Spectrum out = s;
  out.span = span;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = -h; k <= h; ++k) acc += at(i + k);
    out.power[static_cast<std::size_t>(i)] = acc / span;
  }
  return out;
}

struct Peak {
  std::size_t index = 0;
  double frequency = 0.0;
  double power = 0.0;
  double prominence = 0.0;
};

/// Local maxima of the power, endpoints included, ordered by decreasing
/// prominence (height above the higher of the two bracketing minima).
inline std::vector<Peak> find_peaks(const Spectrum& s) {
  const std::size_t n = s.size();
  std::vector<Peak> peaks;
  const auto& p = s.power;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || p[i] > p[i - 1];
    const bool right_ok = i + 1 == n || p[i] >= p[i + 1];
    if (!left_ok || !right_ok || n == 1) continue;
    // Walk outward until a higher point; the minimum on the way bounds the peak.
    double lmin = p[i], rmin = p[i];
    bool lhit = false, rhit = false;
    for (std::size_t j = i; j-- > 0;) {
      if (p[j] > p[i]) {
        lhit = true;
        break;
      }
      lmin = std::min(lmin, p[j]);
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (p[j] > p[i]) {
        rhit = true;
        break;
      }
      rmin = std::min(rmin, p[j]);
    }
    double base;
    if (lhit && rhit) {
      base = std::max(lmin, rmin);
    } else if (lhit) {
      base = lmin;
    } else if (rhit) {
      base = rmin;
    } else {
      base = std::min(lmin, rmin);  // global maximum
    }
    peaks.push_back({i, s.frequencies[i], p[i], p[i] - base});
  }
  std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.prominence > b.prominence; });
  return peaks;
}

/// Index of the grid frequency closest to w (w in [0, pi]).
inline std::size_t nearest_bin(const Spectrum& s, double w) {
  const double step = 2.0 * std::numbers::pi / static_cast<double>(s.length);
  const long j = std::lround(w / step) - 1;
  return static_cast<std::size_t>(std::clamp<long>(j, 0, static_cast<long>(s.size()) - 1));
}

/// True if some local maximum lies within `bins` grid steps of w.
inline bool has_peak_near(const Spectrum& s, const std::vector<Peak>& peaks, double w, int bins) {
  const auto target = static_cast<long>(nearest_bin(s, w));
  return std::any_of(peaks.begin(), peaks.end(),
                     [&](const Peak& p) { return std::abs(static_cast<long>(p.index) - target) <= bins; });
}

/// Maps [0, pi] to [0, 1/2], cycles per observation.
inline double to_cycles(double w) { return w / (2.0 * std::numbers::pi); }

}  // namespace smar
