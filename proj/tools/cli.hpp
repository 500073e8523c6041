#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smar/smar.hpp"

namespace smar::cli {

namespace fs = std::filesystem;

enum Exit : int { ok = 0, usage = 1, numeric = 2 };

enum class Format { json, csv, table };

struct RunConfig {
  std::string command;
  std::string input;
  std::string column;
  std::string output_dir;
  std::string preset;
  std::string config;
  std::string dist = "t";
  std::string naive = "inverse_modulus";
  Format format = Format::table;
  std::optional<std::uint64_t> seed;
  int p_max = -1;
  int order = -1;
  int r = -1;
  int q = -1;
  int season = 12;
  int reps = -1;
  int length = -1;
  int burn_in = -1;
  int max_lag = -1;
  int span = -1;
  unsigned workers = 0;
  double nu = 3.0;
  double sigma = 1.0;
  double intercept = 0.0;
  std::vector<double> phi;
  std::vector<double> varphi;
  std::vector<int> sizes;
  std::vector<double> grid;
  bool no_intercept = false;
  bool grid_starts = false;
  bool residuals = false;
};

// A failure attributed to a pipeline stage, reported as "<stage>: <what>".
struct StageError : std::runtime_error {
  StageError(const std::string& stage, const Error& e, int code)
      : std::runtime_error(stage + ": " + e.what()), exit_code(code) {}
  int exit_code;
};

namespace detail {

inline int exit_code_for(const Error& e) {
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const IoError*>(&e)) return Exit::usage;
  return Exit::numeric;
}

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw StageError(name, e, exit_code_for(e));
  }
}

struct Output {
  const RunConfig& cfg;
  std::ostream& out;

  // Writes an artifact under --output-dir when one is given.
  void file(const std::string& name, const std::string& text) const {
    if (!cfg.output_dir.empty()) write_text(fs::path(cfg.output_dir) / name, text);
  }
  void csv_file(const std::string& name, const std::vector<std::string>& cols,
                const std::vector<std::vector<double>>& data) const {
    if (!cfg.output_dir.empty()) write_csv(fs::path(cfg.output_dir) / name, cols, data);
  }
};

inline std::string csv_text(const std::vector<std::string>& cols, const std::vector<std::vector<double>>& data) {
  std::ostringstream s;
  write_csv(s, cols, data);
  return s.str();
}

inline TimeSeries load_input(const RunConfig& cfg) {
  return stage("ingest", [&] { return ingest_csv(cfg.input, cfg.column); });
}

inline int resolve_order(const RunConfig& cfg, std::span<const double> y, std::optional<OrderSelection>& sel) {
  if (cfg.order >= 0) return cfg.order;
  int p_max = cfg.p_max;
  if (p_max < 0) p_max = std::max(1, std::min<int>(14, static_cast<int>(y.size() / 10) - 1));
  sel = stage("order selection", [&] { return select_ar_order(y, p_max); });
  return sel->p;
}

inline json factor_report(const RootSet& rs) {
  json a = json::array();
  std::vector<bool> done(rs.entries.size(), false);
  for (std::size_t i = 0; i < rs.entries.size(); ++i) {
    if (done[i]) continue;
    done[i] = true;
    const auto& e = rs.entries[i];
    std::vector<double> f;
    if (!e.pair_id) {
      f = {1.0, -e.inverse_root.real()};
    } else {
      for (std::size_t j = i + 1; j < rs.entries.size(); ++j) {
        if (rs.entries[j].pair_id == e.pair_id) done[j] = true;
      }
      f = {1.0, -2.0 * e.inverse_root.real(), std::norm(e.inverse_root)};
    }
    a.push_back({{"coefficients", smar::detail::nums(f)}, {"power", e.multiplicity},
                 {"frequency", smar::detail::num(std::abs(e.frequency))},
                 {"inverse_modulus", smar::detail::num(e.modulus)}});
  }
  return a;
}

}  // namespace detail

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  MarModel model;
  ErrorSpec err;
  int T = 1000, burn = -1;
  if (!cfg.preset.empty()) {
    const auto pr = detail::stage("preset", [&] { return find_preset(cfg.preset); });
    model = pr.model;
    err = pr.error;
    T = pr.T;
    burn = pr.burn_in;
  } else {
    model = MarModel{cfg.phi, cfg.varphi, cfg.intercept};
    err = cfg.dist == "cauchy" ? ErrorSpec::cauchy(cfg.sigma) : ErrorSpec::student_t(cfg.nu, cfg.sigma);
  }
  if (cfg.length > 0) T = cfg.length;
  if (cfg.burn_in >= 0) burn = cfg.burn_in;
  const auto ts = detail::stage("simulate", [&] { return simulate_mar(model, err, T, burn, *cfg.seed); });
  for (const auto& w : ts.warnings) std::cerr << "warning: " << w << "\n";
  detail::Output o{cfg, out};
  o.csv_file("series.csv", {"value"}, {ts.values});
  if (cfg.format == Format::json) {
    out << dump(json{{"schema_version", kSchemaVersion}, {"kind", "series"}, {"model", to_json(model)},
                     {"error", to_json(err)}, {"seed", *cfg.seed}, {"values", smar::detail::nums(ts.values)}});
  } else if (cfg.format == Format::csv || cfg.output_dir.empty()) {
    write_csv(out, {"value"}, {ts.values});
  } else {
    out << "simulated MAR(" << model.r() << "," << model.q() << "), T = " << ts.size() << ", written to "
        << (fs::path(cfg.output_dir) / "series.csv").string() << "\n";
  }
  return Exit::ok;
}

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  const auto ts = detail::load_input(cfg);
  const auto& y = ts.values;
  const int max_lag = cfg.max_lag > 0 ? cfg.max_lag : std::max(1, std::min<int>(40, static_cast<int>(y.size() / 4)));
  const auto raw = detail::stage("periodogram", [&] { return periodogram(y, Normalization::raw); });
  const auto sn = periodogram(y, Normalization::self_normalized);
  const int span = cfg.span > 0 ? cfg.span : default_smoothing_span(y.size());
  const auto sm = detail::stage("smoothing", [&] { return smooth(sn, span); });
  const auto peaks = find_peaks(sm);
  const auto r = detail::stage("acf", [&] { return acf(y, max_lag); });
  const auto pr = pacf(y, max_lag);

  std::vector<double> lags, acfs(r.begin() + 1, r.end()), cycles;
  for (int k = 1; k <= max_lag; ++k) lags.push_back(k);
  for (double w : sn.frequencies) cycles.push_back(to_cycles(w));
  std::vector<double> pf, pc, pp, pprom;
  for (const auto& p : peaks) {
    pf.push_back(p.frequency);
    pc.push_back(to_cycles(p.frequency));
    pp.push_back(p.power);
    pprom.push_back(p.prominence);
  }
  const std::vector<std::string> spec_cols{"frequency", "cycles", "raw", "self_normalized", "smoothed"};
  const std::vector<std::vector<double>> spec_data{sn.frequencies, cycles, raw.power, sn.power, sm.power};
  detail::Output o{cfg, out};
  o.csv_file("spectrum.csv", spec_cols, spec_data);
  o.csv_file("acf.csv", {"lag", "acf", "pacf"}, {lags, acfs, pr});
  o.csv_file("peaks.csv", {"frequency", "cycles", "power", "prominence"}, {pf, pc, pp, pprom});
  if (cfg.format == Format::csv) {
    write_csv(out, spec_cols, spec_data);
  } else if (cfg.format == Format::json) {
    json pk = json::array();
    for (const auto& p : peaks) {
      pk.push_back({{"frequency", p.frequency}, {"cycles", to_cycles(p.frequency)}, {"power", p.power},
                    {"prominence", p.prominence}});
    }
    out << dump(json{{"schema_version", kSchemaVersion}, {"kind", "analysis"}, {"T", y.size()},
                     {"smoothing_span", span}, {"acf", smar::detail::nums(acfs)}, {"pacf", smar::detail::nums(pr)},
                     {"peaks", pk}});
  } else {
    out << "T = " << y.size() << ", smoothing span " << span << "\nlargest spectral peaks (smoothed, self-normalized):\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(5, peaks.size()); ++i) {
      out << "  omega = " << smar::detail::fmt("%.4f", peaks[i].frequency) << "  cycles = "
          << smar::detail::fmt("%.4f", to_cycles(peaks[i].frequency)) << "  prominence = "
          << smar::detail::fmt("%.5f", peaks[i].prominence) << "\n";
    }
    out << "lag      acf     pacf\n";
    for (int k = 0; k < std::min(max_lag, 12); ++k) {
      out << smar::detail::pad(std::to_string(k + 1), 3) << smar::detail::pad(smar::detail::fmt("%.3f", acfs[k]), 9)
          << smar::detail::pad(smar::detail::fmt("%.3f", pr[k]), 9) << "\n";
    }
  }
  return Exit::ok;
}

inline int cmd_identify(const RunConfig& cfg, std::ostream& out) {
  const auto ts = detail::load_input(cfg);
  const auto& y = ts.values;
  std::optional<OrderSelection> sel;
  const int p = detail::resolve_order(cfg, y, sel);
  const auto fit = detail::stage("pseudo-causal fit", [&] { return fit_ar_ols(y, p, true); });
  const auto diag = detail::stage("diagnostics", [&] { return diagnose(fit, sel ? sel->table : std::vector<OrderRow>{}); });
  const auto roots = detail::stage("roots", [&] { return p > 0 ? recover_roots(fit, cfg.season) : std::vector<RecoveredRoot>{}; });
  const auto poly = fit.polynomial();
  const RootSet rs = poly.degree() > 0 ? poly_roots(poly) : RootSet{};
  json j{{"schema_version", kSchemaVersion},
         {"kind", "identification"},
         {"T", y.size()},
         {"season", cfg.season},
         {"order_table", to_json(diag.order_table)},
         {"p", p},
         {"fit", to_json(fit)},
         {"diagnostics", to_json(diag)},
         {"roots", to_json(roots)},
         {"factors", detail::factor_report(rs)},
         {"stationary", rs.stationary()}};
  detail::Output o{cfg, out};
  o.file("identify.json", dump(j));
  if (cfg.format == Format::json) {
    out << dump(j);
  } else if (cfg.format == Format::csv) {
    std::vector<double> ps, s2, b;
    for (const auto& r : diag.order_table) {
      ps.push_back(r.p);
      s2.push_back(r.sigma2);
      b.push_back(r.bic);
    }
    write_csv(out, {"p", "sigma2", "bic"}, {ps, s2, b});
  } else {
    if (!diag.order_table.empty()) out << order_table_text(diag.order_table, p);
    out << "pseudo-causal AR(" << p << ")\n" << root_table_text(roots);
    for (const auto& lb : diag.ljung_box) {
      out << "Ljung-Box h=" << lb.h << ": Q = " << smar::detail::fmt("%.3f", lb.statistic)
          << ", p = " << smar::detail::fmt("%.4f", lb.p_value) << "\n";
    }
    out << "Jarque-Bera: " << smar::detail::fmt("%.3f", diag.jarque_bera.statistic)
        << ", p = " << smar::detail::fmt("%.4g", diag.jarque_bera.p_value) << "\n";
  }
  return Exit::ok;
}

inline AmlOptions aml_options(const RunConfig& cfg) {
  AmlOptions a;
  a.family = parse_error_family(cfg.dist);
  a.estimate_intercept = !cfg.no_intercept;
  return a;
}

inline int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.r < 0 || cfg.q < 0) throw CLI::ValidationError("estimate", "--r and --q are required");
  const auto ts = detail::load_input(cfg);
  const auto& y = ts.values;
  const int p = cfg.r + cfg.q;
  if (p == 0) throw CLI::ValidationError("estimate", "r + q must be positive");
  const auto opt = aml_options(cfg);
  std::vector<std::string> notes;
  const auto fit = detail::stage("pseudo-causal fit", [&] { return fit_ar_ols(y, p, true); });
  const auto roots = detail::stage("roots", [&] {
    auto rs = poly_roots(fit.polynomial());
    return smar::detail::clamp_roots(rs);
  });
  auto plans = enumerate_allocations(roots, cfg.r, cfg.q);
  if (plans.empty()) {
    plans = naive_split_allocations(roots, cfg.r, cfg.q, parse_naive_start(cfg.naive));
    notes.push_back("no allocation keeps conjugate pairs together; starts split pairs (" + cfg.naive + ")");
  }
  const double m = std::isfinite(fit.mean) ? fit.mean : 0.0;
  std::vector<ParamVector> starts;
  for (const auto& pl : plans) {
    for (auto& s : smar::detail::plan_starts(y, pl, m, cfg.grid_starts)) starts.push_back(std::move(s));
  }
  auto res = detail::stage("estimation", [&] { return fit_aml(y, cfg.r, cfg.q, starts, opt); });
  res.std_errors = detail::stage("standard errors", [&] { return standard_errors(res, y, opt); });
  for (auto& n : notes) res.warnings.push_back(n);
  json j{{"schema_version", kSchemaVersion}, {"kind", "estimation"}, {"T", y.size()}, {"starts", starts.size()}};
  j["result"] = to_json(res, cfg.residuals, cfg.season);
  detail::Output o{cfg, out};
  o.file("estimate.json", dump(j));
  if (cfg.format == Format::json) {
    out << dump(j);
  } else if (cfg.format == Format::csv) {
    out << "name,estimate,std_error\n";
    for (std::size_t i = 0; i < res.param_names.size(); ++i) {
      out << res.param_names[i] << "," << format_double(res.estimates[i]) << ","
          << (res.std_errors[i] ? format_double(*res.std_errors[i]) : std::string()) << "\n";
    }
  } else {
    out << "MAR(" << cfg.r << "," << cfg.q << ") " << to_string(opt.family) << " errors, loglik "
        << smar::detail::fmt("%.3f", res.loglik) << (res.converged ? "" : " (not converged)") << "\n";
    for (std::size_t i = 0; i < res.param_names.size(); ++i) {
      std::string name = res.param_names[i];
      name.resize(10, ' ');
      out << "  " << name << smar::detail::pad(smar::detail::fmt("%.4f", res.estimates[i]), 10)
          << (res.std_errors[i] ? "  (" + smar::detail::fmt("%.4f", *res.std_errors[i]) + ")" : std::string("  (n/a)"))
          << "\n";
    }
    for (const auto& w : res.warnings) out << "warning: " << w << "\n";
  }
  return Exit::ok;
}

inline int cmd_select(const RunConfig& cfg, std::ostream& out) {
  const auto ts = detail::load_input(cfg);
  const auto& y = ts.values;
  std::optional<OrderSelection> sel;
  const int p = detail::resolve_order(cfg, y, sel);
  if (p < 1) throw StageError("order selection", InvalidArgument("selected order is 0; nothing to allocate"), Exit::numeric);
  SelectionOptions so;
  so.aml = aml_options(cfg);
  so.season = cfg.season;
  so.perturbation_grid = cfg.grid_starts;
  const auto rep = detail::stage("selection", [&] { return select_model(y, p, so); });
  json j = to_json(rep);
  if (sel) j["order_table"] = to_json(sel->table);
  detail::Output o{cfg, out};
  o.file("select.json", dump(j));
  if (cfg.format == Format::json) {
    out << dump(j);
  } else if (cfg.format == Format::csv) {
    out << "rank,r,q,allocation,naive,loglik,nu,sigma\n";
    for (std::size_t i = 0; i < rep.candidates.size(); ++i) {
      const auto& c = rep.candidates[i];
      out << i + 1 << "," << c.r << "," << c.q << "," << c.allocation.index << "," << (c.allocation.naive ? 1 : 0) << ",";
      if (c.result) {
        out << format_double(c.result->loglik) << ","
            << (c.result->error.family == ErrorFamily::student_t ? format_double(c.result->error.nu) : std::string())
            << "," << format_double(c.result->error.sigma);
      } else {
        out << ",,";
      }
      out << "\n";
    }
  } else {
    out << "pseudo-causal AR(" << p << ")\n" << root_table_text(rep.roots) << selection_table_text(rep);
    if (rep.winner) {
      const auto& w = rep.candidates[*rep.winner];
      out << "selected MAR(" << w.r << "," << w.q << ")\n";
    }
  }
  return Exit::ok;
}

inline int cmd_mc(const RunConfig& cfg, std::ostream& out) {
  ExperimentConfig ec;
  if (!cfg.config.empty()) {
    ec = detail::stage("config", [&] {
      std::ifstream in(cfg.config);
      if (!in) throw IoError("cannot open '" + cfg.config + "'");
      try {
        return experiment_config_from_json(json::parse(in));
      } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
      }
    });
  } else if (cfg.preset == "root-recovery" || cfg.preset.empty()) {
    ec = root_recovery_config();
  } else if (cfg.preset == "selection") {
    ec = selection_config();
  } else {
    throw CLI::ValidationError("--preset", "mc presets are 'root-recovery' and 'selection'");
  }
  ec.seed_base = *cfg.seed;
  if (cfg.reps > 0) ec.replications = cfg.reps;
  if (!cfg.sizes.empty()) ec.sample_sizes = cfg.sizes;
  if (!cfg.grid.empty()) ec.selection_grid = cfg.grid;
  if (cfg.workers > 0) ec.workers = cfg.workers;
  ec.season = cfg.season;
  const auto sum = detail::stage("monte carlo", [&] { return run_experiment(ec); });
  const json j = to_json(sum);
  detail::Output o{cfg, out};
  o.file("mc.json", dump(j));
  if (cfg.format == Format::json) {
    out << dump(j);
  } else if (cfg.format == Format::csv) {
    if (ec.mode == ExperimentMode::root_recovery) {
      out << "T,position,mean_root_re,mean_root_im,mean_modulus,sd_modulus,mean_inverse_modulus,replications,failures\n";
      for (const auto& c : sum.recovery) {
        for (std::size_t k = 0; k < c.roots.size(); ++k) {
          const auto& r = c.roots[k];
          out << c.T << "," << k + 1 << "," << format_double(r.mean_root.real()) << ","
              << format_double(r.mean_root.imag()) << "," << format_double(r.mean_modulus) << ","
              << format_double(r.sd_modulus) << "," << format_double(r.mean_inverse_modulus) << "," << c.replications
              << "," << c.failures << "\n";
        }
      }
    } else {
      out << "grid_value,T,r,q,wins,percent,replications,failures\n";
      for (const auto& c : sum.selection) {
        for (const auto& w : c.shares) {
          out << format_double(c.grid_value) << "," << c.T << "," << w.r << "," << w.q << "," << w.wins << ","
              << format_double(w.percent) << "," << c.replications << "," << c.failures << "\n";
        }
      }
    }
  } else {
    out << experiment_table_text(sum);
  }
  return Exit::ok;
}

/// Parses argv and runs one command. Returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Seasonal mixed causal-noncausal autoregressions"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string fmt = "table";
  const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}, {"table", Format::table}};

  auto common = [&](CLI::App* c) {
    c->add_option("--output-dir", cfg.output_dir, "Directory for artifacts");
    c->add_option("--format", fmt, "Terminal output format")->check(CLI::IsMember({"json", "csv", "table"}));
    c->add_option("--season", cfg.season, "Seasonal period S")->check(CLI::PositiveNumber);
  };
  auto input = [&](CLI::App* c) {
    c->add_option("--input", cfg.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    c->add_option("--column", cfg.column, "Column name (default: first column)");
  };
  auto order = [&](CLI::App* c) {
    c->add_option("--p-max", cfg.p_max, "Largest AR order for BIC selection")->check(CLI::PositiveNumber);
    c->add_option("--order", cfg.order, "Fixed pseudo-causal order (skips BIC)")->check(CLI::NonNegativeNumber);
  };
  auto estimation = [&](CLI::App* c) {
    c->add_option("--dist", cfg.dist, "Error family")->check(CLI::IsMember({"t", "cauchy"}));
    c->add_flag("--no-intercept", cfg.no_intercept, "Fix the intercept at the pseudo-causal mean");
    c->add_flag("--grid-starts", cfg.grid_starts, "Add +-0.1 coefficient perturbations as extra starts");
  };

  auto* sim = app.add_subcommand("simulate", "Simulate a MAR process to series.csv");
  common(sim);
  sim->add_option("--preset", cfg.preset, "Named model");
  sim->add_option("--phi", cfg.phi, "Causal coefficients")->delimiter(',');
  sim->add_option("--varphi", cfg.varphi, "Noncausal coefficients")->delimiter(',');
  sim->add_option("--intercept", cfg.intercept, "Process mean");
  sim->add_option("--dist", cfg.dist, "Error family")->check(CLI::IsMember({"t", "cauchy"}));
  sim->add_option("--nu", cfg.nu, "Degrees of freedom")->check(CLI::PositiveNumber);
  sim->add_option("--sigma", cfg.sigma, "Error scale")->check(CLI::PositiveNumber);
  sim->add_option("--length", cfg.length, "Number of observations")->check(CLI::PositiveNumber);
  sim->add_option("--burn-in", cfg.burn_in, "Discarded points at each end")->check(CLI::NonNegativeNumber);
  sim->add_option("--seed", cfg.seed, "Random seed")->required();

  auto* ana = app.add_subcommand("analyze", "Periodogram, ACF and PACF");
  common(ana);
  input(ana);
  ana->add_option("--max-lag", cfg.max_lag, "Largest ACF/PACF lag")->check(CLI::PositiveNumber);
  ana->add_option("--span", cfg.span, "Daniell smoothing span (odd)")->check(CLI::PositiveNumber);

  auto* idf = app.add_subcommand("identify", "Pseudo-causal order, diagnostics and roots");
  common(idf);
  input(idf);
  order(idf);

  auto* est = app.add_subcommand("estimate", "AML estimation of a MAR(r, q)");
  common(est);
  input(est);
  estimation(est);
  est->add_option("--r", cfg.r, "Causal order")->required()->check(CLI::NonNegativeNumber);
  est->add_option("--q", cfg.q, "Noncausal order")->required()->check(CLI::NonNegativeNumber);
  est->add_option("--naive", cfg.naive, "Start rule when pairs must be split")
      ->check(CLI::IsMember({"inverse_modulus", "reciprocal_real_part", "inverse_root_real_part"}));
  est->add_flag("--residuals", cfg.residuals, "Include residuals in the JSON");

  auto* slc = app.add_subcommand("select", "Rank all MAR(r, q) with r + q = p");
  common(slc);
  input(slc);
  order(slc);
  estimation(slc);

  auto* mc = app.add_subcommand("mc", "Monte Carlo experiments");
  common(mc);
  mc->add_option("--preset", cfg.preset, "root-recovery or selection");
  mc->add_option("--config", cfg.config, "Experiment config JSON")->check(CLI::ExistingFile);
  mc->add_option("--seed", cfg.seed, "Base seed")->required();
  mc->add_option("--reps", cfg.reps, "Replications per cell")->check(CLI::PositiveNumber);
  mc->add_option("--sizes", cfg.sizes, "Sample sizes")->delimiter(',');
  mc->add_option("--grid", cfg.grid, "Selection grid values")->delimiter(',');
  mc->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Exit::ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return Exit::usage;
  }
  cfg.format = formats.at(fmt);
  for (auto* s : {sim, ana, idf, est, slc, mc}) {
    if (s->parsed()) cfg.command = s->get_name();
  }

  try {
    if (!cfg.output_dir.empty()) {
      std::error_code ec;
      fs::create_directories(cfg.output_dir, ec);
      if (ec || !fs::is_directory(cfg.output_dir)) {
        err << "usage error: cannot create output directory '" << cfg.output_dir << "'\n";
        return Exit::usage;
      }
    }
    if (cfg.command == "simulate") return cmd_simulate(cfg, out);
    if (cfg.command == "analyze") return cmd_analyze(cfg, out);
    if (cfg.command == "identify") return cmd_identify(cfg, out);
    if (cfg.command == "estimate") return cmd_estimate(cfg, out);
    if (cfg.command == "select") return cmd_select(cfg, out);
    if (cfg.command == "mc") return cmd_mc(cfg, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const StageError& e) {
    err << "error in " << e.what() << "\n";
    return e.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::exit_code_for(e);
  }
  return Exit::usage;
}

}  // namespace smar::cli
