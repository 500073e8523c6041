#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "smar/error.hpp"
#include "smar/mcharness.hpp"
#include "smar/modelsel.hpp"
#include "smar/pseudofit.hpp"
#include "smar/roots.hpp"
#include "smar/simulate.hpp"
#include "smar/spectra.hpp"

namespace smar {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- CSV

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

/// Reads one numeric column of a headed CSV file. `column` is a header name,
/// or empty for the first column. Blank lines are only allowed at the end.
inline TimeSeries ingest_csv(const std::filesystem::path& path, const std::string& column = "") {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path.string() + "' is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = detail::split_csv_line(line);
  std::size_t col = 0;
  if (!column.empty()) {
    bool found = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (detail::trim(header[i]) == column) {
        col = i;
        found = true;
        break;
      }
    }
    if (!found) throw IoError("column '" + column + "' not found in '" + path.string() + "'");
  }
  TimeSeries ts;
  std::size_t lineno = 1;
  std::optional<std::size_t> blank_at;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) {
      if (!blank_at) blank_at = lineno;
      continue;
    }
    if (blank_at) throw IoError(path.string() + ":" + std::to_string(*blank_at) + ": blank line inside the series");
    const auto cells = detail::split_csv_line(line);
    if (col >= cells.size()) throw IoError(path.string() + ":" + std::to_string(lineno) + ": missing column");
    const auto v = detail::parse_double(cells[col]);
    if (!v) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": non-numeric value '" +
                    std::string(detail::trim(cells[col])) + "'");
    }
    ts.values.push_back(*v);
  }
  if (ts.values.empty()) throw IoError("'" + path.string() + "' contains no observations");
  return ts;
}

/// Writes named columns of equal length with a header row.
inline void write_csv(std::ostream& out, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) throw InvalidArgument("column names and data differ in count");
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != n) throw InvalidArgument("CSV columns differ in length");
  }
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << format_double(columns[j][i]);
    out << '\n';
  }
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_csv(out, names, columns);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts) {
  write_csv(path, {"value"}, {ts.values});
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

// ---------------------------------------------------------------- JSON

namespace detail {

// NaN and infinities have no JSON spelling; they become null.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline json complex_json(cplx z) { return json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

}  // namespace detail

inline json to_json(const RootEntry& e, int S) {
  const auto lab = classify_root(e, S);
  json j;
  j["root"] = detail::complex_json(e.root);
  j["inverse_root"] = detail::complex_json(e.inverse_root);
  j["modulus"] = detail::num(std::abs(e.root));
  j["inverse_modulus"] = detail::num(e.modulus);
  j["frequency"] = detail::num(e.frequency);
  j["multiplicity"] = e.multiplicity;
  j["pair_id"] = e.pair_id ? json(*e.pair_id) : json(nullptr);
  j["label"] = to_string(lab.kind);
  j["harmonic"] = lab.kind == FrequencyKind::harmonic ? json(lab.harmonic) : json(nullptr);
  j["nearest_seasonal_frequency"] = detail::num(lab.nearest_frequency);
  return j;
}

inline json to_json(const RootSet& rs, int S) {
  json a = json::array();
  for (const auto& e : rs.entries) a.push_back(to_json(e, S));
  return a;
}

inline json to_json(const ArFit& f) {
  return json{{"p", f.p},
              {"coefficients", detail::nums(f.a)},
              {"intercept", detail::num(f.intercept)},
              {"mean", detail::num(f.mean)},
              {"sigma2", detail::num(f.sigma2)},
              {"loglik_gaussian", detail::num(f.loglik_gaussian)},
              {"bic", detail::num(f.bic)},
              {"n_eff", f.n_eff()}};
}

inline json to_json(const std::vector<OrderRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back({{"p", r.p}, {"sigma2", detail::num(r.sigma2)}, {"bic", detail::num(r.bic)}});
  return a;
}

inline json to_json(const LjungBox& lb) {
  return json{{"h", lb.h}, {"statistic", detail::num(lb.statistic)}, {"dof", lb.dof}, {"p_value", detail::num(lb.p_value)}};
}

inline json to_json(const JarqueBera& jb) {
  return json{{"statistic", detail::num(jb.statistic)},
              {"p_value", detail::num(jb.p_value)},
              {"skewness", detail::num(jb.skewness)},
              {"kurtosis", detail::num(jb.kurtosis)}};
}

inline json to_json(const DiagnosticsReport& d) {
  json lb = json::array();
  for (const auto& x : d.ljung_box) lb.push_back(to_json(x));
  return json{{"ljung_box", lb}, {"jarque_bera", to_json(d.jarque_bera)}};
}

inline json to_json(const MarModel& m) {
  return json{{"r", m.r()}, {"q", m.q()}, {"phi", detail::nums(m.phi)}, {"varphi", detail::nums(m.varphi)},
              {"intercept", detail::num(m.intercept)}};
}

inline json to_json(const ErrorSpec& e) {
  json j{{"family", to_string(e.family)}, {"sigma", detail::num(e.sigma)}};
  j["nu"] = e.family == ErrorFamily::student_t ? detail::num(e.nu) : json(nullptr);
  return j;
}

/// Roots, moduli and frequencies of both fitted polynomials.
inline json factorization_json(const MarModel& m, int S) {
  auto side = [&](const std::vector<double>& a) {
    if (a.empty()) return json::array();
    const auto poly = Polynomial::from_ar(a);
    if (poly.degree() == 0) return json::array();
    try {
      return to_json(poly_roots(poly), S);
    } catch (const Error&) {
      return json::array();
    }
  };
  return json{{"causal", side(m.phi)}, {"noncausal", side(m.varphi)}};
}

inline json to_json(const EstimationResult& r, bool with_residuals = false, int S = 12) {
  json params = json::array();
  for (std::size_t i = 0; i < r.param_names.size(); ++i) {
    json p{{"name", r.param_names[i]}, {"estimate", detail::num(r.estimates[i])}};
    p["std_error"] = i < r.std_errors.size() && r.std_errors[i] ? detail::num(*r.std_errors[i]) : json(nullptr);
    params.push_back(p);
  }
  json j{{"model", to_json(r.model)},
         {"error", to_json(r.error)},
         {"loglik", detail::num(r.loglik)},
         {"parameters", params},
         {"converged", r.converged},
         {"iterations", r.iterations},
         {"evaluations", r.evaluations},
         {"start_index", r.start_index},
         {"start", json{{"phi", detail::nums(r.start_used.phi)},
                        {"varphi", detail::nums(r.start_used.varphi)},
                        {"intercept", detail::num(r.start_used.intercept)},
                        {"sigma", detail::num(r.start_used.sigma())}}},
         {"factorization", factorization_json(r.model, S)},
         {"n_residuals", r.residuals.size()},
         {"warnings", r.warnings}};
  if (with_residuals) j["residuals"] = detail::nums(r.residuals);
  return j;
}

inline json to_json(const std::vector<RecoveredRoot>& roots) {
  json a = json::array();
  for (const auto& rr : roots) {
    a.push_back({{"root", detail::complex_json(rr.entry.root)},
                 {"modulus", detail::num(rr.root_modulus)},
                 {"inverse_modulus", detail::num(rr.entry.modulus)},
                 {"frequency", detail::num(rr.entry.frequency)},
                 {"label", to_string(rr.label.kind)},
                 {"harmonic", rr.label.kind == FrequencyKind::harmonic ? json(rr.label.harmonic) : json(nullptr)}});
  }
  return a;
}

namespace detail {

inline json plan_json(const AllocationPlan& p) {
  json c = json::array(), n = json::array();
  for (auto z : p.causal_roots) c.push_back(complex_json(z));
  for (auto z : p.noncausal_roots) n.push_back(complex_json(z));
  return json{{"index", p.index}, {"naive", p.naive}, {"causal_inverse_roots", c}, {"noncausal_inverse_roots", n},
              {"start_phi", nums(p.phi)}, {"start_varphi", nums(p.varphi)}};
}

}  // namespace detail

inline json to_json(const SelectionReport& rep) {
  json groups = json::array();
  for (const auto& g : rep.groups) {
    groups.push_back({{"r", g.r}, {"q", g.q}, {"candidates", g.candidates}, {"feasible", g.candidates > 0},
                      {"naive_starts", g.naive}});
  }
  json cands = json::array();
  for (std::size_t i = 0; i < rep.candidates.size(); ++i) {
    const auto& c = rep.candidates[i];
    json j{{"rank", i + 1}, {"r", c.r}, {"q", c.q}, {"allocation", detail::plan_json(c.allocation)}};
    if (c.result) {
      j["fit"] = to_json(*c.result);
    } else {
      j["fit"] = nullptr;
      j["failure"] = c.failure;
    }
    cands.push_back(j);
  }
  json w = nullptr;
  if (rep.winner) {
    const auto& c = rep.candidates[*rep.winner];
    w = json{{"rank", *rep.winner + 1}, {"r", c.r}, {"q", c.q}};
  }
  return json{{"schema_version", kSchemaVersion},
              {"kind", "selection"},
              {"p", rep.p},
              {"pseudo_causal", to_json(rep.pseudo_causal)},
              {"roots", to_json(rep.roots)},
              {"jarque_bera", to_json(rep.gaussianity)},
              {"orders", groups},
              {"candidates", cands},
              {"winner", w},
              {"warnings", rep.warnings}};
}

inline json to_json(const ExperimentConfig& c) {
  json j{{"mode", to_string(c.mode)},
         {"dgp", to_json(c.dgp)},
         {"error", to_json(c.error)},
         {"sample_sizes", c.sample_sizes},
         {"replications", c.replications},
         {"seed_base", c.seed_base},
         {"burn_in", c.burn_in},
         {"season", c.season}};
  if (c.mode == ExperimentMode::root_recovery) {
    j["ar_order"] = c.ar_order;
  } else {
    j["selection_grid"] = detail::nums(c.selection_grid);
    j["selection_frequency"] = detail::num(c.selection_frequency);
    j["naive_start"] = to_string(c.naive);
    j["estimate_intercept"] = c.estimate_intercept;
    j["perturbation_grid"] = c.perturbation_grid;
  }
  return j;
}

/// Reads an experiment config; absent keys keep the defaults of the mode's
/// standard design.
inline ExperimentConfig experiment_config_from_json(const json& j) {
  try {
    const auto mode = parse_experiment_mode(j.value("mode", std::string("root_recovery")));
    ExperimentConfig c = mode == ExperimentMode::root_recovery ? root_recovery_config() : selection_config();
    if (j.contains("dgp")) {
      const auto& d = j.at("dgp");
      c.dgp.phi = d.value("phi", std::vector<double>{});
      c.dgp.varphi = d.value("varphi", std::vector<double>{});
      c.dgp.intercept = d.value("intercept", 0.0);
    }
    if (j.contains("error")) {
      const auto& e = j.at("error");
      c.error.family = parse_error_family(e.value("family", std::string("t")));
      c.error.sigma = e.value("sigma", 1.0);
      if (c.error.family == ErrorFamily::student_t) c.error.nu = e.value("nu", 3.0);
    }
    c.sample_sizes = j.value("sample_sizes", c.sample_sizes);
    c.replications = j.value("replications", c.replications);
    c.seed_base = j.value("seed_base", c.seed_base);
    c.burn_in = j.value("burn_in", c.burn_in);
    c.season = j.value("season", c.season);
    c.ar_order = j.value("ar_order", c.ar_order);
    c.selection_grid = j.value("selection_grid", c.selection_grid);
    c.selection_frequency = j.value("selection_frequency", c.selection_frequency);
    if (j.contains("naive_start")) c.naive = parse_naive_start(j.at("naive_start").get<std::string>());
    c.estimate_intercept = j.value("estimate_intercept", c.estimate_intercept);
    c.perturbation_grid = j.value("perturbation_grid", c.perturbation_grid);
    c.workers = j.value("workers", c.workers);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad experiment config: ") + e.what());
  }
}

inline json to_json(const ExperimentSummary& s) {
  json j{{"schema_version", kSchemaVersion}, {"kind", "experiment"}, {"config", to_json(s.config)}};
  json cells = json::array();
  for (const auto& c : s.recovery) {
    json roots = json::array();
    for (const auto& r : c.roots) {
      roots.push_back({{"mean_root", detail::complex_json(r.mean_root)},
                       {"mean_modulus", detail::num(r.mean_modulus)},
                       {"sd_modulus", detail::num(r.sd_modulus)},
                       {"mean_inverse_modulus", detail::num(r.mean_inverse_modulus)}});
    }
    cells.push_back({{"T", c.T}, {"replications", c.replications}, {"failures", c.failures}, {"roots", roots},
                     {"failure_messages", c.failure_messages}});
  }
  for (const auto& c : s.selection) {
    json shares = json::array();
    for (const auto& w : c.shares) {
      shares.push_back({{"r", w.r}, {"q", w.q}, {"wins", w.wins}, {"percent", detail::num(w.percent)}});
    }
    cells.push_back({{"grid_value", detail::num(c.grid_value)}, {"T", c.T}, {"replications", c.replications},
                     {"failures", c.failures}, {"shares", shares}, {"failure_messages", c.failure_messages}});
  }
  j["cells"] = cells;
  return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace smar
