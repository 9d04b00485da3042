// Command-line front end: every analysis as a subcommand with machine-readable
// CSV/JSON output. Exit codes: 0 ok, 2 config error, 3 numeric failure.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "scdyn/scdyn.hpp"

namespace {

using namespace scdyn;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

ScalarFn builtin_g(const std::string& name) {
  if (name == "identity") return [](double x) { return x; };
  if (name == "expneg") return [](double x) { return std::exp(-x); };
  if (name == "inv1p") return [](double x) { return 1.0 / (1.0 + x); };
  if (name == "logistic")
    return [](double x) { return 0.05 + 0.9 / (1.0 + std::exp(-12.0 * (x - 0.6))); };
  throw parameter_error("unknown builtin g '" + name + "' (known: identity, expneg, inv1p, logistic)");
}

/// Model grammar: "ldpc:L,R" | "table:f=PATH,g=PATH" | "cancel:g=NAME,sigma2=S,alpha=A"
SystemModel parse_model(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "ldpc") {
    auto parts = split(args, ',');
    if (parts.size() == 1) parts = split(args, '/');
    if (parts.size() != 2) throw parameter_error("model: expected ldpc:l,r");
    return make_ldpc_regular(std::stoi(parts[0]), std::stoi(parts[1]));
  }
  if (kind == "table") {
    std::string f_path, g_path;
    for (const auto& kv : split(args, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw parameter_error("model: expected table:f=PATH,g=PATH");
      const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
      if (k == "f")
        f_path = v;
      else if (k == "g")
        g_path = v;
      else
        throw parameter_error("model: unknown table key '" + k + "'");
    }
    if (f_path.empty() || g_path.empty()) throw parameter_error("model: table needs both f= and g=");
    return load_table_model(f_path, g_path);
  }
  if (kind == "cancel") {
    std::string gname = "identity";
    double sigma2 = 0.0, alpha = 1.0;
    for (const auto& kv : split(args, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw parameter_error("model: expected cancel:g=NAME,sigma2=S,alpha=A");
      const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
      if (k == "g")
        gname = v;
      else if (k == "sigma2")
        sigma2 = std::stod(v);
      else if (k == "alpha")
        alpha = std::stod(v);
      else
        throw parameter_error("model: unknown cancel key '" + k + "'");
    }
    return make_cancelation(builtin_g(gname), sigma2, alpha);
  }
  throw parameter_error("model: unknown kind '" + kind + "' (known: ldpc, table, cancel)");
}

CouplingVariant parse_variant(const std::string& s) {
  if (s == "inside") return CouplingVariant::InsideAverage;
  if (s == "outside") return CouplingVariant::OutsideAverage;
  throw parameter_error("variant must be 'inside' or 'outside'");
}

Boundary parse_boundary(const std::string& s) {
  if (s == "anchored") return Boundary::Anchored;
  if (s == "circular") return Boundary::Circular;
  throw parameter_error("boundary must be 'anchored' or 'circular'");
}

std::vector<int> parse_int_list(const std::string& s) {
  // "1..6" or "11,22,33"
  const auto dots = s.find("..");
  std::vector<int> out;
  if (dots != std::string::npos) {
    const int a = std::stoi(s.substr(0, dots));
    const int b = std::stoi(s.substr(dots + 2));
    for (int v = a; v <= b; ++v) out.push_back(v);
  } else {
    for (const auto& p : split(s, ',')) out.push_back(std::stoi(p));
  }
  if (out.empty()) throw parameter_error("empty integer list");
  return out;
}

unsigned resolve_seed(unsigned cli_seed, bool seed_given) {
  if (seed_given) return cli_seed;
  if (const char* env = std::getenv("ANALYZER_SEED")) return static_cast<unsigned>(std::stoul(env));
  return 12345u;
}

std::string itos(long v) { return std::to_string(v); }

void warn_regime(const CoupledConfig& cfg) {
  if (!cfg.theorem_regime())
    std::cerr << "warning: L=" << cfg.L << " < 2w+1=" << 2 * cfg.w + 1
              << " is outside the theorem regime; results are still reported\n";
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

/// Expands "--config FILE" into the option list: config entries are validated
/// against the subcommand's options (unknown keys are errors naming the key)
/// and injected before the explicit flags, so the command line wins.
std::vector<std::string> expand_config_args(CLI::App& app, int argc, char** argv) {
  std::vector<std::string> in(argv + 1, argv + argc);
  if (in.empty()) return in;
  CLI::App* sub = app.get_subcommand_no_throw(in[0]);
  if (sub == nullptr) return in;

  std::string config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 1; i < in.size(); ++i) {
    if (in[i] == "--config") {
      if (i + 1 >= in.size()) throw parameter_error("--config needs a file path");
      config_path = in[++i];
    } else if (in[i].rfind("--config=", 0) == 0) {
      config_path = in[i].substr(9);
    } else {
      rest.push_back(in[i]);
    }
  }
  std::vector<std::string> out{in[0]};
  if (!config_path.empty()) {
    std::ifstream file(config_path);
    if (!file) throw parameter_error("cannot open config file: " + config_path);
    std::string line;
    while (std::getline(file, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw parameter_error("config line is not 'key = value': " + line);
      const std::string key = trim(line.substr(0, eq));
      const std::string value = unquote(trim(line.substr(eq + 1)));
      if (key.empty()) throw parameter_error("config line has an empty key: " + line);
      const CLI::Option* opt = sub->get_option_no_throw("--" + key);
      if (opt == nullptr || key == "config")
        throw parameter_error("unknown config key '" + key + "' for subcommand '" + in[0] + "'");
      if (opt->get_expected_min() == 0) {  // flag
        if (value == "true" || value == "1") out.push_back("--" + key);
        else if (value != "false" && value != "0")
          throw parameter_error("config key '" + key + "' is a flag; use true/false");
      } else {
        out.push_back("--" + key);
        out.push_back(value);
      }
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scdyn: thresholds of single and spatially coupled discrete dynamical systems"};
  app.set_version_flag("--version", scdyn::kVersion);
  app.require_subcommand(1);

  // shared knobs (duplicated per subcommand so config files stay flat)
  struct Common {
    std::string model_spec = "ldpc:3,6";
    int L = 1, w = 1;
    std::string variant = "inside", boundary = "anchored";
    unsigned seed = 12345;
    bool seed_given = false;
  };

  auto add_common = [](CLI::App* sub, Common& c, bool coupled) {
    std::string dummy;
    sub->add_option("--config", dummy, "plain-text key = value config file (flags win)");
    sub->add_option("--model", c.model_spec, "model spec: ldpc:l,r | table:f=PATH,g=PATH | cancel:g=NAME,sigma2=S,alpha=A");
    if (coupled) {
      sub->add_option("--L", c.L, "number of coupled copies");
      sub->add_option("--w", c.w, "coupling width");
      sub->add_option("--variant", c.variant, "inside | outside")->check(CLI::IsMember({"inside", "outside"}));
      sub->add_option("--boundary", c.boundary, "anchored | circular")->check(CLI::IsMember({"anchored", "circular"}));
    }
    auto* seed_opt = sub->add_option("--seed", c.seed, "RNG seed (env ANALYZER_SEED as fallback)");
    sub->callback([seed_opt, &c] { c.seed_given = seed_opt->count() > 0; });
  };

  // ------------------------------ threshold -------------------------------
  auto* th = app.add_subcommand("threshold", "single / coupled / potential / cancelation thresholds");
  Common thc;
  std::string th_method = "minratio";
  double th_tol = 1e-6, th_eps_max = 1.0;
  int th_grid = 2000;
  long th_max_iter = 200000;
  std::string th_out = "threshold.json";
  add_common(th, thc, true);
  th->add_option("--method", th_method, "minratio | single-de | potential | coupled-de | cancelation")
      ->check(CLI::IsMember({"minratio", "single-de", "potential", "coupled-de", "cancelation"}));
  th->add_option("--epsilon-tol", th_tol, "bisection tolerance on epsilon")->check(CLI::PositiveNumber);
  th->add_option("--grid", th_grid, "x-grid size for the potential predicate");
  th->add_option("--eps-max", th_eps_max, "upper end of the epsilon search range");
  th->add_option("--max-iter", th_max_iter, "iteration cap per DE predicate");
  th->add_option("--out", th_out, "output JSON path");

  // ------------------------------- evolve ---------------------------------
  auto* ev = app.add_subcommand("evolve", "run the (coupled) recursion and export the trajectory");
  Common evc;
  double ev_eps = 0.0, ev_tol = 1e-10, ev_x0 = -1.0;
  long ev_max_iter = 100000;
  int ev_stride = 1;
  std::string ev_out = "trajectory.csv", ev_summary = "evolve_summary.json";
  add_common(ev, evc, true);
  ev->add_option("--epsilon", ev_eps, "channel / load parameter")->required();
  ev->add_option("--x0", ev_x0, "uniform initial value (default: domain max)");
  ev->add_option("--tol", ev_tol, "step tolerance")->check(CLI::PositiveNumber);
  ev->add_option("--max-iter", ev_max_iter, "iteration cap");
  ev->add_option("--stride", ev_stride, "record every n-th state");
  ev->add_option("--out", ev_out, "trajectory CSV path");
  ev->add_option("--summary", ev_summary, "summary JSON path");

  // ------------------------------ potential -------------------------------
  auto* po = app.add_subcommand("potential", "potential profile and Lyapunov condition checks");
  Common poc;
  double po_eps = 0.0;
  int po_grid = 4096;
  std::string po_B = "gprime";
  bool po_check = false;
  std::string po_out = "potential.csv", po_report = "potential_report.json";
  add_common(po, poc, true);
  po->add_option("--epsilon", po_eps, "channel parameter")->required();
  po->add_option("--grid", po_grid, "profile grid segments");
  po->add_option("--B", po_B, "gprime | identity (matrix field for V_B)")
      ->check(CLI::IsMember({"gprime", "identity"}));
  po->add_flag("--check-conditions", po_check, "also run the Lyapunov condition check");
  po->add_option("--out", po_out, "profile CSV path");
  po->add_option("--report", po_report, "condition report JSON path");

  // ------------------------------ spectral --------------------------------
  auto* sp = app.add_subcommand("spectral", "coupling matrix spectra and the instability test");
  Common spc;
  bool sp_rho = false, sp_dump = false, sp_circular = false;
  std::string sp_w = "3";
  double sp_rho_tol = 1e-10, sp_eps = 0.0;
  long sp_max_iter = 1000000;
  std::string sp_out = "spectral.json", sp_matrix_out = "matrix.csv";
  add_common(sp, spc, false);
  sp->add_option("--L", spc.L, "number of coupled copies");
  sp->add_option("--w", sp_w, "coupling width, or a range like 1..6 for the rho check");
  sp->add_option("--variant", spc.variant, "inside | outside")->check(CLI::IsMember({"inside", "outside"}));
  sp->add_option("--boundary", spc.boundary, "anchored | circular")
      ->check(CLI::IsMember({"anchored", "circular"}));
  sp->add_flag("--check-rho-lemma", sp_rho, "verify rho(D) = 1 over the w range (circular D)");
  sp->add_option("--rho-tol", sp_rho_tol, "tolerance for |rho - 1|");
  sp->add_option("--epsilon", sp_eps, "epsilon for the instability test");
  sp->add_option("--max-iter", sp_max_iter, "fixed-point iteration cap for the instability test");
  sp->add_flag("--dump-matrix", sp_dump, "write the coupling matrix D");
  sp->add_flag("--circular", sp_circular, "dump the circular variant");
  sp->add_option("--out", sp_out, "report JSON path");
  sp->add_option("--matrix-out", sp_matrix_out, "matrix CSV path");

  // ------------------------------ continuum -------------------------------
  auto* co = app.add_subcommand("continuum", "continuum fixed points and discrete comparison");
  Common coc;
  int co_alpha = 4, co_mesh = 0;
  double co_eps = 0.0, co_tol = 1e-10;
  bool co_interior = false;
  std::string co_out = "continuum.csv", co_report = "continuum_compare.json";
  add_common(co, coc, true);
  co->add_option("--alpha", co_alpha, "half-length L/w of the continuum domain");
  co->add_option("--epsilon", co_eps, "channel parameter")->required();
  co->add_option("--mesh", co_mesh, "mesh points per unit length (default 8w, min 16)");
  co->add_option("--tol", co_tol, "Picard step tolerance")->check(CLI::PositiveNumber);
  co->add_flag("--interior", co_interior, "solve the interior (whole-line) equation instead");
  co->add_option("--out", co_out, "profile CSV path");
  co->add_option("--report", co_report, "comparison JSON path");

  // -------------------------------- sweep ---------------------------------
  auto* sw = app.add_subcommand("sweep", "coupled-DE threshold sweep over (L, w) lists");
  Common swc;
  std::string sw_L_list = "33", sw_w_list = "1..3";
  double sw_tol = 1e-4;
  long sw_max_iter = 200000;
  int sw_jobs = 1;
  std::string sw_out = "sweep.csv";
  add_common(sw, swc, true);
  sw->add_option("--L-list", sw_L_list, "chain lengths, e.g. 11,22,33");
  sw->add_option("--w-list", sw_w_list, "coupling widths, e.g. 1..5");
  sw->add_option("--epsilon-tol", sw_tol, "bisection tolerance")->check(CLI::PositiveNumber);
  sw->add_option("--max-iter", sw_max_iter, "iteration cap per DE predicate");
  sw->add_option("--jobs", sw_jobs, "worker threads")->check(CLI::PositiveNumber);
  sw->add_option("--out", sw_out, "sweep CSV path");

  try {
    // config-file entries are injected before explicit flags; with take-last
    // resolution the command line wins over the file
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
      for (CLI::Option* opt : sub->get_options())
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::vector<std::string> args = expand_config_args(app, argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (th->parsed()) {
      auto model = parse_model(thc.model_spec);
      CoupledConfig cfg{thc.L, thc.w, parse_variant(thc.variant), parse_boundary(thc.boundary)};
      ThresholdResult res;
      if (th_method == "minratio") {
        res = single_threshold_minratio(model);
      } else if (th_method == "single-de") {
        res = single_threshold_de(model, th_tol, th_eps_max);
      } else if (th_method == "potential") {
        res = potential_threshold(model, th_grid, th_tol, th_eps_max);
      } else if (th_method == "coupled-de") {
        warn_regime(cfg);
        res = coupled_threshold_de(model, cfg, th_tol, CoupledDEOptions{th_max_iter, 1e-10, th_eps_max});
      } else {
        res = cancelation_threshold(model);
      }
      ConfigEcho echo{{"subcommand", "threshold"}, {"model", thc.model_spec}, {"method", th_method},
                      {"L", itos(thc.L)},          {"w", itos(thc.w)},        {"variant", thc.variant},
                      {"boundary", thc.boundary},  {"epsilon-tol", fmt_double(th_tol)},
                      {"grid", itos(th_grid)},     {"eps-max", fmt_double(th_eps_max)},
                      {"max-iter", itos(th_max_iter)}, {"out", th_out},
                      {"seed", itos(resolve_seed(thc.seed, thc.seed_given))}};
      write_text_atomic(th_out, threshold_json(res, echo));
      std::printf("method=%s threshold=%.9f..%.9f\n", to_string(res.method), res.lo, res.hi);
    }

    if (ev->parsed()) {
      auto model = parse_model(evc.model_spec);
      CoupledConfig cfg{evc.L, evc.w, parse_variant(evc.variant), parse_boundary(evc.boundary)};
      warn_regime(cfg);
      const double x0 = ev_x0 < 0.0 ? model.domain().hi : ev_x0;
      StateVector start(static_cast<std::size_t>(cfg.L), x0);
      auto tr = run_coupled(model, cfg, start, ev_eps, RunOptions{ev_max_iter, ev_tol, ev_stride});
      ConfigEcho echo{{"subcommand", "evolve"},   {"model", evc.model_spec},  {"L", itos(cfg.L)},
                      {"w", itos(cfg.w)},         {"variant", evc.variant},   {"boundary", evc.boundary},
                      {"epsilon", fmt_double(ev_eps)}, {"x0", fmt_double(x0)}, {"tol", fmt_double(ev_tol)},
                      {"max-iter", itos(ev_max_iter)}, {"stride", itos(ev_stride)},
                      {"out", ev_out},            {"summary", ev_summary},
                      {"seed", itos(resolve_seed(evc.seed, evc.seed_given))}};
      write_text_atomic(ev_out, trajectory_csv(tr, echo));
      write_text_atomic(ev_summary, trajectory_summary_json(tr, cfg, echo));
      std::printf("evolve iterations=%ld converged_to_zero=%d final_residual=%.3e\n", tr.iterations,
                  tr.converged_to_zero ? 1 : 0, tr.final_residual);
    }

    if (po->parsed()) {
      auto model = parse_model(poc.model_spec);
      const BField B = po_B == "identity" ? BField::identity() : BField::diagonal_g_prime();
      ConfigEcho echo{{"subcommand", "potential"}, {"model", poc.model_spec},
                      {"epsilon", fmt_double(po_eps)}, {"grid", itos(po_grid)}, {"B", po_B},
                      {"out", po_out},                 {"report", po_report},
                      {"seed", itos(resolve_seed(poc.seed, poc.seed_given))}};
      PotentialProfile prof;
      if (po_B == "gprime") {
        prof = potential_profile(model, po_eps, po_grid);
      } else {
        auto integrand = [&](double z) { return z - model.f(model.g(z), po_eps); };
        prof.epsilon = po_eps;
        prof.values = cumulative_simpson(integrand, model.domain().lo, model.domain().hi, po_grid);
        prof.grid.resize(prof.values.size());
        for (std::size_t k = 0; k < prof.grid.size(); ++k)
          prof.grid[k] = model.domain().lo + model.domain().width() * static_cast<double>(k) / po_grid;
        prof.min_value = prof.values[0];
        prof.argmin = prof.grid[0];
        for (std::size_t k = 1; k < prof.values.size(); ++k)
          if (prof.values[k] < prof.min_value) {
            prof.min_value = prof.values[k];
            prof.argmin = prof.grid[k];
          }
      }
      write_text_atomic(po_out, profile_csv(prof, echo));
      if (po_check) {
        CoupledConfig cfg{poc.L, poc.w, parse_variant(poc.variant), parse_boundary(poc.boundary)};
        auto rep = check_lyapunov_conditions(model, cfg, B, po_eps, std::min(po_grid, 2000),
                                             resolve_seed(poc.seed, poc.seed_given));
        write_text_atomic(po_report, condition_report_json(rep, echo));
        std::printf("conditions passed=%d positivity=%d decrease=%d min_V=%.6e\n", rep.passed() ? 1 : 0,
                    rep.positivity_ok ? 1 : 0, rep.decrease_ok ? 1 : 0, rep.min_v);
      }
      std::printf("potential min=%.9e argmin=%.6f\n", prof.min_value, prof.argmin);
    }

    if (sp->parsed()) {
      const auto w_list = parse_int_list(sp_w);
      const int w_single = w_list.front();
      ConfigEcho echo{{"subcommand", "spectral"}, {"model", spc.model_spec}, {"L", itos(spc.L)},
                      {"w", sp_w},                {"variant", spc.variant},  {"boundary", spc.boundary},
                      {"epsilon", fmt_double(sp_eps)},
                      {"rho-tol", fmt_double(sp_rho_tol)}, {"max-iter", itos(sp_max_iter)},
                      {"out", sp_out},            {"matrix-out", sp_matrix_out},
                      {"seed", itos(resolve_seed(spc.seed, spc.seed_given))}};
      if (sp_rho) {
        auto rep = verify_rho_lemma(w_list, sp_rho_tol);
        write_text_atomic(sp_out, rho_lemma_json(rep, echo));
        for (std::size_t k = 0; k + 1 < rep.entries.size(); k += 2) {
          const auto& a = rep.entries[k];
          const auto& b = rep.entries[k + 1];
          std::printf("%s w=%d rho(L=%d)=%.12f rho(L=%d)=%.12f (truncated: %.6f, %.6f)\n",
                      a.pass && b.pass ? "PASS" : "FAIL", a.w, a.L, a.rho_circular, b.L, b.rho_circular,
                      a.rho_truncated, b.rho_truncated);
        }
      } else if (sp_dump) {
        auto D = build_D(spc.L, w_single, sp_circular);
        write_text_atomic(sp_matrix_out, matrix_csv(D, echo));
        std::printf("matrix L=%d w=%d circular=%d written\n", spc.L, w_single, sp_circular ? 1 : 0);
      } else {
        auto model = parse_model(spc.model_spec);
        CoupledConfig cfg{spc.L, w_single, parse_variant(spc.variant), parse_boundary(spc.boundary)};
        warn_regime(cfg);
        auto rep = instability_test(model, cfg, sp_eps, 1e-10, sp_max_iter);
        write_text_atomic(sp_out, linearization_json(rep, echo));
        if (rep.stable_at_origin)
          std::printf("instability: stable at origin (fixed point is 0)\n");
        else
          std::printf("instability: rho_A=%.9f unstable=%d\n", rep.rho_A,
                      rep.has_unstable_eigenvalue ? 1 : 0);
      }
    }

    if (co->parsed()) {
      auto model = parse_model(coc.model_spec);
      const int mesh = co_mesh > 0 ? co_mesh : std::max(16, 8 * coc.w);
      ConfigEcho echo{{"subcommand", "continuum"}, {"model", coc.model_spec}, {"alpha", itos(co_alpha)},
                      {"w", itos(coc.w)},          {"epsilon", fmt_double(co_eps)}, {"mesh", itos(mesh)},
                      {"tol", fmt_double(co_tol)}, {"interior", co_interior ? "true" : "false"},
                      {"out", co_out},             {"report", co_report},
                      {"seed", itos(resolve_seed(coc.seed, coc.seed_given))}};
      if (co_interior) {
        auto prof = solve_interior_fixed_point(model, co_alpha, co_eps, mesh, co_tol);
        write_text_atomic(co_out, continuum_csv(prof, echo));
        std::printf("interior solve converged=%d iterations=%ld max_v=%.6f\n", prof.converged ? 1 : 0,
                    prof.iterations, max_norm(prof.values));
      } else {
        auto cmp = compare_with_discrete(model, co_alpha, coc.w, co_eps, mesh, co_tol);
        write_text_atomic(co_out, continuum_csv(cmp.profile, echo));
        write_text_atomic(co_report, comparison_json(cmp, echo));
        std::printf("continuum gap=%.6f (<= 2/w = %.6f: %s)\n", cmp.sup_gap, 2.0 / coc.w,
                    cmp.sup_gap <= 2.0 / coc.w ? "yes" : "no");
      }
    }

    if (sw->parsed()) {
      auto Ls = parse_int_list(sw_L_list);
      auto ws = parse_int_list(sw_w_list);
      auto model = parse_model(swc.model_spec);
      const auto variant = parse_variant(swc.variant);
      const auto boundary = parse_boundary(swc.boundary);
      std::vector<SweepRow> rows(Ls.size() * ws.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= rows.size()) return;
          const int L = Ls[k / ws.size()];
          const int w = ws[k % ws.size()];
          CoupledConfig cfg{L, w, variant, boundary};
          SweepRow row;
          row.L = L;
          row.w = w;
          row.variant = variant;
          row.result = coupled_threshold_de(model, cfg, sw_tol, CoupledDEOptions{sw_max_iter, 1e-10, 1.0});
          rows[k] = std::move(row);
        }
      };
      std::vector<std::thread> pool;
      for (int t = 0; t < std::max(1, sw_jobs); ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      ConfigEcho echo{{"subcommand", "sweep"},   {"model", swc.model_spec},  {"L-list", sw_L_list},
                      {"w-list", sw_w_list},     {"variant", swc.variant},   {"boundary", swc.boundary},
                      {"epsilon-tol", fmt_double(sw_tol)}, {"max-iter", itos(sw_max_iter)},
                      {"jobs", itos(sw_jobs)},   {"out", sw_out},
                      {"seed", itos(resolve_seed(swc.seed, swc.seed_given))}};
      write_text_atomic(sw_out, sweep_csv(rows, echo));
      std::printf("sweep rows=%zu written to %s\n", rows.size(), sw_out.c_str());
    }

    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help / --version
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const parameter_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const model_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const shape_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {  // e.g. unparsable numbers in a model spec
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
