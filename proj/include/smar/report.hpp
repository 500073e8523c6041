#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "smar/mcharness.hpp"
#include "smar/modelsel.hpp"
#include "smar/pseudofit.hpp"

namespace smar {

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string complex_text(cplx z, const char* f = "%.3f") {
  std::string s = fmt(f, z.real());
  if (z.imag() != 0.0) s += (z.imag() < 0 ? " - " : " + ") + fmt(f, std::abs(z.imag())) + "i";
  return s;
}

inline std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.insert(0, w - s.size(), ' ');
  return s;
}

}  // namespace detail

inline std::string order_table_text(const std::vector<OrderRow>& rows, int chosen) {
  std::string out = "   p      sigma2         BIC\n";
  for (const auto& r : rows) {
    out += detail::pad(std::to_string(r.p), 4) + detail::pad(detail::fmt("%.5f", r.sigma2), 12) +
           detail::pad(detail::fmt("%.3f", r.bic), 12) + (r.p == chosen ? "  *" : "") + "\n";
  }
  return out;
}

inline std::string root_table_text(const std::vector<RecoveredRoot>& roots) {
  std::string out = "  root                     modulus  inv.mod  frequency  label\n";
  for (const auto& r : roots) {
    std::string label = to_string(r.label.kind);
    if (r.label.kind == FrequencyKind::harmonic) label += " k=" + std::to_string(r.label.harmonic);
    std::string z = detail::complex_text(r.entry.root);
    z.resize(std::max<std::size_t>(z.size(), 24), ' ');
    out += "  " + z + detail::pad(detail::fmt("%.3f", r.root_modulus), 8) +
           detail::pad(detail::fmt("%.3f", r.entry.modulus), 9) + detail::pad(detail::fmt("%.4f", r.entry.frequency), 11) +
           "  " + label + "\n";
  }
  return out;
}

/// Ranked candidates: model, allocation, loglik, nu, sigma.
inline std::string selection_table_text(const SelectionReport& rep) {
  std::string out = "rank  model      alloc   " + detail::pad("loglik", 14) + detail::pad("nu", 10) + detail::pad("sigma", 10) + "\n";
  for (std::size_t i = 0; i < rep.candidates.size(); ++i) {
    const auto& c = rep.candidates[i];
    std::string model = "MAR(" + std::to_string(c.r) + "," + std::to_string(c.q) + ")";
    model.resize(11, ' ');
    std::string alloc = std::to_string(c.allocation.index) + (c.allocation.naive ? " naive" : "");
    alloc.resize(8, ' ');
    out += detail::pad(std::to_string(i + 1), 4) + "  " + model + alloc;
    if (c.result) {
      const auto& e = c.result->error;
      out += detail::pad(detail::fmt("%.3f", c.result->loglik), 14) +
             detail::pad(e.family == ErrorFamily::student_t ? detail::fmt("%.3f", e.nu) : std::string("-"), 10) +
             detail::pad(detail::fmt("%.3f", e.sigma), 10);
    } else {
      out += "  failed: " + c.failure;
    }
    out += "\n";
  }
  for (const auto& g : rep.groups) {
    if (g.candidates == 0) {
      out += "MAR(" + std::to_string(g.r) + "," + std::to_string(g.q) + "): no allocation keeps conjugate pairs together\n";
    }
  }
  for (const auto& w : rep.warnings) out += "warning: " + w + "\n";
  return out;
}

inline std::string experiment_table_text(const ExperimentSummary& s) {
  std::string out;
  for (const auto& c : s.recovery) {
    out += "T = " + std::to_string(c.T) + "  (" + std::to_string(c.replications) + " replications, " +
           std::to_string(c.failures) + " failures)\n";
    out += "  position  mean root              mean modulus (sd)     mean inv. modulus\n";
    for (std::size_t k = 0; k < c.roots.size(); ++k) {
      const auto& r = c.roots[k];
      std::string z = detail::complex_text(r.mean_root);
      z.resize(std::max<std::size_t>(z.size(), 22), ' ');
      out += detail::pad(std::to_string(k + 1), 10) + "  " + z + detail::fmt("%8.3f", r.mean_modulus) + " (" +
             detail::fmt("%.3f", r.sd_modulus) + ")" + detail::pad(detail::fmt("%.3f", r.mean_inverse_modulus), 14) + "\n";
    }
  }
  for (const auto& c : s.selection) {
    out += "v = " + detail::fmt("%.2f", c.grid_value) + "  T = " + std::to_string(c.T) + "  (" +
           std::to_string(c.replications) + " replications, " + std::to_string(c.failures) + " failures):";
    for (const auto& w : c.shares) {
      out += "  (" + std::to_string(w.r) + "," + std::to_string(w.q) + ") " + detail::fmt("%.2f", w.percent) + "%";
    }
    out += "\n";
  }
  return out;
}

}  // namespace smar
