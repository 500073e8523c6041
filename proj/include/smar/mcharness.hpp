#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "smar/errdist.hpp"
#include "smar/error.hpp"
#include "smar/model.hpp"
#include "smar/modelsel.hpp"
#include "smar/presets.hpp"
#include "smar/pseudofit.hpp"
#include "smar/rng.hpp"
#include "smar/simulate.hpp"

namespace smar {

enum class ExperimentMode { root_recovery, selection };

inline const char* to_string(ExperimentMode m) {
  return m == ExperimentMode::root_recovery ? "root_recovery" : "selection";
}

inline ExperimentMode parse_experiment_mode(const std::string& s) {
  if (s == "root_recovery") return ExperimentMode::root_recovery;
  if (s == "selection") return ExperimentMode::selection;
  throw InvalidArgument("unknown experiment mode '" + s + "'");
}

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::root_recovery;
  MarModel dgp;  // in selection mode the noncausal part is replaced per grid value
  ErrorSpec error = ErrorSpec::student_t(3.0, 1.0);
  std::vector<int> sample_sizes{100, 200, 500, 1000};
  int replications = 500;
  std::uint64_t seed_base = 0;
  int burn_in = -1;
  int season = 12;
  int ar_order = -1;  // root recovery: fitted AR order, default r + q of the DGP

  // Selection: noncausal pair of inverse modulus v at this frequency, v over the grid.
  std::vector<double> selection_grid{0.3, 0.5, 0.7};
  double selection_frequency = 5.0 * std::numbers::pi / 6.0;
  NaiveStart naive = NaiveStart::inverse_modulus;
  bool estimate_intercept = false;
  bool perturbation_grid = false;

  unsigned workers = 0;  // 0 = available parallelism

  void validate() const {
    if (replications < 1) throw InvalidArgument("replications must be >= 1");
    if (sample_sizes.empty()) throw InvalidArgument("at least one sample size is required");
    for (int T : sample_sizes) {
      if (T < 50) throw InvalidArgument("sample sizes must be >= 50");
    }
    error.validate();
    if (mode == ExperimentMode::selection && selection_grid.empty()) {
      throw InvalidArgument("selection grid must be nonempty");
    }
    for (double v : selection_grid) {
      if (!(v > 0.0 && v < 1.0)) throw InvalidArgument("selection grid values must lie in (0, 1)");
    }
  }
};

/// Design of the root-recovery study: MAR(1,2) with a causal root at zero
/// frequency and a noncausal pair at 5 pi / 6.
inline ExperimentConfig root_recovery_config(int replications = 500, std::uint64_t seed = 501) {
  ExperimentConfig c;
  c.mode = ExperimentMode::root_recovery;
  c.dgp = find_preset("root-recovery").model;
  c.replications = replications;
  c.seed_base = seed;
  return c;
}

/// Design of the selection study: purely noncausal pair, phi = 0.
inline ExperimentConfig selection_config(int replications = 200, std::uint64_t seed = 600) {
  ExperimentConfig c;
  c.mode = ExperimentMode::selection;
  c.dgp = MarModel{{}, {}, 0.0};
  c.replications = replications;
  c.seed_base = seed;
  return c;
}

struct RootStat {
  std::complex<double> mean_root;
  double mean_modulus = 0.0;
  double sd_modulus = 0.0;
  double mean_inverse_modulus = 0.0;
};

struct RecoveryCell {
  int T = 0;
  int replications = 0;  // successful
  int failures = 0;
  std::vector<RootStat> roots;  // by position in the ordered root list
  std::vector<std::string> failure_messages;  // first few, for the report
};

struct WinShare {
  int r = 0;
  int q = 0;
  int wins = 0;
  double percent = 0.0;
};

struct SelectionCell {
  double grid_value = 0.0;
  int T = 0;
  int replications = 0;
  int failures = 0;
  std::vector<WinShare> shares;  // ordered by r descending
  std::vector<std::string> failure_messages;

  double percent(int r, int q) const {
    for (const auto& s : shares) {
      if (s.r == r && s.q == q) return s.percent;
    }
    return 0.0;
  }
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::vector<RecoveryCell> recovery;
  std::vector<SelectionCell> selection;
};

namespace detail {

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, n) on a pool; results land in slot i, so the
// outcome never depends on scheduling.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned workers, F&& job) {
  std::vector<R> out(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) out[i] = job(i);
  };
  const unsigned w = worker_count(workers, n);
  if (w <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < w; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

inline std::uint64_t replication_seed(std::uint64_t base, std::size_t cell, std::size_t rep) {
  return CounterRng(base).split(cell).split(rep).key();
}

constexpr std::size_t kKeptFailureMessages = 5;

}  // namespace detail

/// Simulate, fit the pseudo-causal AR, recover and order the roots, and
/// average them per sample size. Nothing is trimmed.
inline ExperimentSummary run_root_recovery(const ExperimentConfig& cfg) {
  cfg.validate();
  cfg.dgp.require_stationary();
  const int p = cfg.ar_order >= 0 ? cfg.ar_order : cfg.dgp.r() + cfg.dgp.q();
  ExperimentSummary sum;
  sum.config = cfg;
  struct Rep {
    std::optional<std::vector<cplx>> roots;
    std::string failure;
  };
  for (std::size_t c = 0; c < cfg.sample_sizes.size(); ++c) {
    const int T = cfg.sample_sizes[c];
    auto reps = detail::parallel_map<Rep>(static_cast<std::size_t>(cfg.replications), cfg.workers, [&](std::size_t i) {
      Rep rep;
      try {
        const auto y = simulate_mar(cfg.dgp, cfg.error, T, cfg.burn_in, detail::replication_seed(cfg.seed_base, c, i));
        std::vector<cplx> roots;
        if (p > 0) {
          for (const auto& rr : recover_roots(fit_ar_ols(y.values, p, true), cfg.season)) roots.push_back(rr.entry.root);
        }
        if (static_cast<int>(roots.size()) != p) throw NumericFailure("fitted polynomial lost degree", 0.0);
        rep.roots = std::move(roots);
      } catch (const Error& e) {
        rep.failure = e.what();
      }
      return rep;
    });
    RecoveryCell cell;
    cell.T = T;
    cell.roots.assign(static_cast<std::size_t>(p), RootStat{});
    std::vector<double> m2(static_cast<std::size_t>(p), 0.0);
    for (const auto& rep : reps) {
      if (!rep.roots) {
        ++cell.failures;
        if (cell.failure_messages.size() < detail::kKeptFailureMessages) cell.failure_messages.push_back(rep.failure);
        continue;
      }
      ++cell.replications;
      for (std::size_t k = 0; k < rep.roots->size(); ++k) {
        const cplx z = (*rep.roots)[k];
        auto& s = cell.roots[k];
        s.mean_root += z;
        s.mean_modulus += std::abs(z);
        m2[k] += std::norm(z);
        s.mean_inverse_modulus += 1.0 / std::abs(z);
      }
    }
    if (cell.replications > 0) {
      const double n = cell.replications;
      for (std::size_t k = 0; k < cell.roots.size(); ++k) {
        auto& s = cell.roots[k];
        s.mean_root /= n;
        s.mean_modulus /= n;
        s.mean_inverse_modulus /= n;
        const double var = cell.replications > 1 ? (m2[k] - n * s.mean_modulus * s.mean_modulus) / (n - 1.0) : 0.0;
        s.sd_modulus = std::sqrt(std::max(0.0, var));
      }
    }
    sum.recovery.push_back(std::move(cell));
  }
  return sum;
}

/// For every grid value and sample size: simulate, select among MAR(r, q)
/// with r + q = 2 by log-likelihood, and tally winners.
inline ExperimentSummary run_selection(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentSummary sum;
  sum.config = cfg;
  const int p = static_cast<int>(cfg.dgp.phi.size()) + 2;
  SelectionOptions sopt;
  sopt.season = cfg.season;
  sopt.naive_split_starts = true;
  sopt.naive = cfg.naive;
  sopt.perturbation_grid = cfg.perturbation_grid;
  sopt.aml.family = cfg.error.family;
  sopt.aml.estimate_intercept = cfg.estimate_intercept;
  std::size_t cell_index = 0;
  struct Rep {
    std::optional<std::pair<int, int>> winner;
    std::string failure;
  };
  for (double v : cfg.selection_grid) {
    MarModel dgp = cfg.dgp;
    dgp.varphi = detail::pair_ar(v, cfg.selection_frequency);
    dgp.require_stationary();
    for (int T : cfg.sample_sizes) {
      const std::size_t c = cell_index++;
      auto reps = detail::parallel_map<Rep>(static_cast<std::size_t>(cfg.replications), cfg.workers, [&](std::size_t i) {
        Rep rep;
        try {
          const auto y = simulate_mar(dgp, cfg.error, T, cfg.burn_in, detail::replication_seed(cfg.seed_base, c, i));
          const auto report = select_model(y.values, p, sopt);
          if (!report.winner) throw NoFeasibleStart("no candidate could be fitted");
          const auto& w = report.candidates[*report.winner];
          rep.winner = std::make_pair(w.r, w.q);
        } catch (const Error& e) {
          rep.failure = e.what();
        }
        return rep;
      });
      SelectionCell cell;
      cell.grid_value = v;
      cell.T = T;
      for (int r = p; r >= 0; --r) cell.shares.push_back({r, p - r, 0, 0.0});
      for (const auto& rep : reps) {
        if (!rep.winner) {
          ++cell.failures;
          if (cell.failure_messages.size() < detail::kKeptFailureMessages) cell.failure_messages.push_back(rep.failure);
          continue;
        }
        ++cell.replications;
        ++cell.shares[static_cast<std::size_t>(p - rep.winner->first)].wins;
      }
      for (auto& s : cell.shares) {
        s.percent = cell.replications > 0 ? 100.0 * s.wins / cell.replications : 0.0;
      }
      sum.selection.push_back(std::move(cell));
    }
  }
  return sum;
}

inline ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  return cfg.mode == ExperimentMode::root_recovery ? run_root_recovery(cfg) : run_selection(cfg);
}

}  // namespace smar
