#ifndef SCDYN_IO_HPP
#define SCDYN_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scdyn/continuum.hpp"
#include "scdyn/dynamics.hpp"
#include "scdyn/errors.hpp"
#include "scdyn/lyapunov_potential.hpp"
#include "scdyn/spectral.hpp"
#include "scdyn/threshold.hpp"
#include "scdyn/version.hpp"

namespace scdyn {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Write-then-rename so partially written artifacts never appear under the
/// final name.
inline void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw parameter_error("cannot open output file: " + tmp.string());
    out << content;
    if (!out) throw numeric_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

inline std::string csv_header(const ConfigEcho& echo) {
  std::ostringstream os;
  os << "# scdyn " << kVersion << "\n";
  for (const auto& [k, v] : echo) os << "# " << k << " = " << v << "\n";
  return os.str();
}

inline nlohmann::ordered_json json_envelope(const ConfigEcho& echo) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : echo) cfg[k] = v;
  j["config"] = cfg;
  return j;
}

// -------------------------------- dynamics ---------------------------------

inline std::string trajectory_csv(const Trajectory& tr, const ConfigEcho& echo) {
  std::ostringstream os;
  os << csv_header(echo) << "iteration,i,value\n";
  for (std::size_t s = 0; s < tr.states.size(); ++s) {
    const long it = (s + 1 == tr.states.size() && tr.record_stride > 0)
                        ? tr.iterations
                        : static_cast<long>(s) * std::max(1, tr.record_stride);
    for (std::size_t i = 0; i < tr.states[s].size(); ++i)
      os << it << ',' << i << ',' << fmt_double(tr.states[s][i]) << "\n";
  }
  return os.str();
}

inline std::string trajectory_summary_json(const Trajectory& tr, const CoupledConfig& cfg,
                                           const ConfigEcho& echo) {
  auto j = json_envelope(echo);
  j["epsilon"] = tr.epsilon;
  j["L"] = cfg.L;
  j["w"] = cfg.w;
  j["variant"] = to_string(cfg.variant);
  j["boundary"] = to_string(cfg.boundary);
  j["converged_to_zero"] = tr.converged_to_zero;
  j["iterations"] = tr.iterations;
  j["final_residual"] = tr.final_residual;
  return j.dump(2) + "\n";
}

// -------------------------------- potential --------------------------------

inline std::string profile_csv(const PotentialProfile& p, const ConfigEcho& echo) {
  std::ostringstream os;
  os << csv_header(echo) << "x,U\n";
  for (std::size_t k = 0; k < p.grid.size(); ++k)
    os << fmt_double(p.grid[k]) << ',' << fmt_double(p.values[k]) << "\n";
  return os.str();
}

inline std::string condition_report_json(const ConditionReport& rep, const ConfigEcho& echo) {
  auto j = json_envelope(echo);
  j["zero_ok"] = rep.zero_ok;
  j["positivity_ok"] = rep.positivity_ok;
  j["decrease_ok"] = rep.decrease_ok;
  j["passed"] = rep.passed();
  j["v_at_zero"] = rep.v_at_zero;
  j["min_v"] = rep.min_v;
  j["argmin_v"] = rep.argmin_v;
  j["worst_decrease_margin"] = rep.worst_decrease_margin;
  j["worst_decrease_state"] = rep.worst_decrease_state;
  j["samples"] = rep.samples;
  if (rep.positivity_violation) {
    j["positivity_violation"] = {{"state", rep.positivity_violation->state},
                                 {"value", rep.positivity_violation->value}};
  }
  if (rep.decrease_violation) {
    j["decrease_violation"] = {{"state", rep.decrease_violation->state},
                               {"value", rep.decrease_violation->value}};
  }
  return j.dump(2) + "\n";
}

// -------------------------------- threshold --------------------------------

inline std::string threshold_json(const ThresholdResult& res, const ConfigEcho& echo) {
  auto j = json_envelope(echo);
  j["method"] = to_string(res.method);
  j["value"] = res.value;
  j["lo"] = res.lo;
  j["hi"] = res.hi;
  j["evaluations"] = res.evaluations;
  if (res.witness_x) j["witness_x"] = *res.witness_x;
  if (res.witness_state) j["witness_state"] = *res.witness_state;
  j["stationarity_residual"] = res.stationarity_residual;
  j["boundary_flagged"] = res.boundary_flagged;
  j["saturated_at_max"] = res.saturated_at_max;
  return j.dump(2) + "\n";
}

struct SweepRow {
  int L = 0, w = 0;
  CouplingVariant variant = CouplingVariant::InsideAverage;
  ThresholdResult result;
};

inline std::string sweep_csv(const std::vector<SweepRow>& rows, const ConfigEcho& echo) {
  std::ostringstream os;
  os << csv_header(echo) << "L,w,variant,method,threshold_lo,threshold_hi,evaluations\n";
  for (const auto& r : rows)
    os << r.L << ',' << r.w << ',' << to_string(r.variant) << ',' << to_string(r.result.method) << ','
       << fmt_double(r.result.lo) << ',' << fmt_double(r.result.hi) << ',' << r.result.evaluations << "\n";
  return os.str();
}

// -------------------------------- spectral ---------------------------------

/// Dense CSV for n <= 64, banded triplets (i, j, value) otherwise.
inline std::string matrix_csv(const CouplingMatrix& M, const ConfigEcho& echo) {
  std::ostringstream os;
  os << csv_header(echo);
  if (M.n <= 64) {
    for (int i = 0; i < M.n; ++i) {
      for (int j = 0; j < M.n; ++j) {
        if (j) os << ',';
        os << fmt_double(M.at(i, j));
      }
      os << "\n";
    }
  } else {
    os << "i,j,value\n";
    for (int i = 0; i < M.n; ++i)
      for (int j = 0; j < M.n; ++j)
        if (M.at(i, j) != 0.0) os << i << ',' << j << ',' << fmt_double(M.at(i, j)) << "\n";
  }
  return os.str();
}

inline std::string rho_lemma_json(const RhoLemmaReport& rep, const ConfigEcho& echo) {
  auto j = json_envelope(echo);
  j["all_pass"] = rep.all_pass;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : rep.entries) {
    arr.push_back({{"w", e.w},
                   {"L", e.L},
                   {"rho_circular", e.rho_circular},
                   {"rho_truncated", e.rho_truncated},
                   {"leading_min", e.leading_min},
                   {"pass", e.pass}});
  }
  j["entries"] = arr;
  return j.dump(2) + "\n";
}

inline std::string linearization_json(const LinearizationReport& rep, const ConfigEcho& echo) {
  auto j = json_envelope(echo);
  j["epsilon"] = rep.epsilon;
  j["stable_at_origin"] = rep.stable_at_origin;
  j["rho_A"] = rep.rho_A;
  j["has_unstable_eigenvalue"] = rep.has_unstable_eigenvalue;
  j["fixed_point"] = rep.fixed_point;
  j["a"] = rep.a;
  j["leading_vector"] = rep.leading_vector;
  return j.dump(2) + "\n";
}

// -------------------------------- continuum --------------------------------

inline std::string continuum_csv(const ContinuumProfile& p, const ConfigEcho& echo) {
  std::ostringstream os;
  os << csv_header(echo) << "x,v\n";
  for (std::size_t k = 0; k < p.grid.size(); ++k)
    os << fmt_double(p.grid[k]) << ',' << fmt_double(p.values[k]) << "\n";
  return os.str();
}

inline std::string comparison_json(const ContinuumComparison& cmp, const ConfigEcho& echo) {
  auto j = json_envelope(echo);
  j["sup_gap"] = cmp.sup_gap;
  j["continuum_max"] = cmp.continuum_max;
  j["discrete_max"] = cmp.discrete_max;
  j["chain_length"] = cmp.chain_length;
  j["continuum_converged"] = cmp.profile.converged;
  j["continuum_iterations"] = cmp.profile.iterations;
  return j.dump(2) + "\n";
}

}  // namespace scdyn

#endif  // SCDYN_IO_HPP
