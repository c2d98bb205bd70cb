#include "cli/commands.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cli/run_config.hpp"
#include "collapse/automaton.hpp"
#include "collapse/errors.hpp"
#include "collapse/pfn.hpp"
#include "collapse/solver.hpp"
#include "collapse/trace_io.hpp"
#include "json.hpp"

namespace collapse::cli {

namespace {

using nlohmann::json;

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  auto log = std::make_shared<spdlog::logger>("collapse", sink);
  log->set_pattern("collapse: %l: %v");
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("COLLAPSE_LOG")) {
    const std::string v(env);
    if (v == "error") level = spdlog::level::err;
    else if (v == "warn") level = spdlog::level::warn;
    else if (v == "info") level = spdlog::level::info;
    else if (v == "debug") level = spdlog::level::debug;
  }
  log->set_level(level);
  return log;
}

struct InstanceArgs {
  double theta_i = 0.0;
  double phi_i = 0.0;
  double rho = 1.0;
  double tau = 0.0;
  int grid_n = 1024;
  std::string method = "both";
};

void add_instance_options(CLI::App& cmd, InstanceArgs& a) {
  cmd.add_option("--theta-i", a.theta_i, "polar angle of the initial axis")->required();
  cmd.add_option("--phi-i", a.phi_i, "azimuth of the initial axis")->required();
  cmd.add_option("--rho", a.rho, "|first amplitude|^2 of the input state, in [0, 1]")->required();
  cmd.add_option("--tau", a.tau, "relative phase of the input state")->required();
  cmd.add_option("--grid", a.grid_n, "grid samples per chart dimension")->capture_default_str();
}

struct Instance {
  Axis axis;
  SpinState state;
  SolverConfig cfg;
};

Instance build_instance(const InstanceArgs& a, SolverMethod method) {
  if (!std::isfinite(a.theta_i) || !std::isfinite(a.phi_i))
    throw DomainError("initial axis angles must be finite");
  Instance inst{canonicalize_axis(a.theta_i, a.phi_i), SpinState::make(a.rho, a.tau), {}};
  inst.cfg.grid_n = a.grid_n;
  inst.cfg.method = method;
  inst.cfg.validate();
  return inst;
}

/// "error: msg" followed by the input and a caret under `pos`.
void report_expr_error(spdlog::logger& log, const std::string& what, const std::string& text, std::size_t pos) {
  log.error("{}", what);
  log.error("  {}", text);
  log.error("  {}^", std::string(std::min(pos, text.size()), ' '));
}

// Runs `body`, mapping library exceptions onto diagnostics and exit code 1.
template <class F>
int guarded(spdlog::logger& log, const std::string& expr_text, F&& body) {
  try {
    return body();
  } catch (const SyntaxError& e) {
    report_expr_error(log, e.what(), expr_text, e.position());
  } catch (const ArityError& e) {
    if (expr_text.empty()) log.error("{}", e.what());
    else report_expr_error(log, e.what(), expr_text, e.position());
  } catch (const std::exception& e) {
    log.error("{}", e.what());
  }
  return kExitUsage;
}

int cmd_solve(const InstanceArgs& a, bool as_json, std::ostream& out, spdlog::logger& log) {
  return guarded(log, "", [&] {
    const auto inst = build_instance(a, parse_solver_method(a.method));
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = solve_collapse(inst.axis, inst.state, inst.cfg);
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    log.info("solved with method {} on a {}x{} grid in {:.1f} ms", to_string(inst.cfg.method), a.grid_n, a.grid_n, ms);

    if (as_json) {
      out << solution_json(sol, 2) << '\n';
    } else {
      out << "status  " << to_string(sol.status) << '\n'
          << "theta_f " << sol.axis_f.theta() << '\n'
          << "phi_f   " << sol.axis_f.phi() << '\n'
          << "s_up    " << sol.s_up.value() << '\n';
    }
    if (sol.agreement && !sol.agreement->agree) {
      log.error("grid and closed-form routes disagree (axis delta {:.3g} rad, S_up delta {:.3g})",
                sol.agreement->axis_delta, sol.agreement->s_up_delta);
      return kExitDisagreement;
    }
    return kExitOk;
  });
}

int cmd_trace(const InstanceArgs& a, const std::string& path, std::ostream& out, spdlog::logger& log) {
  return guarded(log, "", [&] {
    const auto inst = build_instance(a, SolverMethod::grid);
    const auto sol = solve_collapse_grid(inst.axis, inst.state, inst.cfg);
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_trace_csv(file, sol.curves);
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
    if (sol.status == Status::trivial) log.warn("trivial instance: no level sets to trace, wrote header only");

    std::size_t vertices = 0;
    for (const auto& c : sol.curves) vertices += c.vertices.size();
    json summary = {{"status", std::string(to_string(sol.status))},
                    {"components", count_components(sol.curves)},
                    {"polylines", sol.curves.size()},
                    {"vertices", vertices},
                    {"out", path}};
    out << summary.dump() << '\n';
    return kExitOk;
  });
}

std::vector<HistoryEntry> seeded_history(int depth, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<HistoryEntry> h;
  for (int k = 0; k < depth; ++k) {
    HistoryEntry e;
    e.projection.xi = (gen() & 1U) != 0;
    e.projection.eta = (gen() & 1U) != 0;
    e.outcome = outcome_from_bit((gen() & 1U) != 0);
    h.push_back(e);
  }
  return h;
}

int cmd_run(const std::string& config_path, std::ostream& out, spdlog::logger& log) {
  RunConfig rc;
  try {
    rc = load_run_config(config_path);
  } catch (const std::exception& e) {
    log.error("{}: {}", config_path, e.what());
    return kExitUsage;
  }
  return guarded(log, rc.pfn, [&] {
    const auto pfn = parse_expr(rc.pfn, rc.memory_depth);
    SolverConfig cfg;
    cfg.grid_n = rc.grid_n;
    cfg.method = rc.method;
    cfg.validate();
    const auto state = SpinState::make(rc.rho, rc.tau);
    ObserverAutomaton automaton(canonicalize_axis(rc.theta_i, rc.phi_i), pfn, cfg);
    const auto history = seeded_history(rc.memory_depth, rc.seed);
    automaton.seed_history(history);

    const auto result = automaton.run(state, static_cast<std::size_t>(rc.max_steps));
    std::ofstream file(rc.out);
    if (!file) throw std::runtime_error("cannot open '" + rc.out + "' for writing");
    write_jsonl(file, result);
    if (!file) throw std::runtime_error("failed writing '" + rc.out + "'");
    log.info("wrote {} step records to {}", result.records.size(), rc.out);
    out << run_summary_json(result) << '\n';
    return kExitOk;
  });
}

int cmd_pfn_table(const std::string& expr, int depth, std::ostream& out, spdlog::logger& log) {
  return guarded(log, expr, [&] {
    out << to_truth_table(parse_expr(expr, depth), depth).to_hex() << '\n';
    return kExitOk;
  });
}

int cmd_pfn_normal_form(const std::string& hex, int depth, bool dnf, std::ostream& out, spdlog::logger& log) {
  return guarded(log, "", [&] {
    const auto table = TruthTable::from_hex(hex, depth);
    out << render(dnf ? to_dnf(table) : to_cnf(table)) << '\n';
    return kExitOk;
  });
}

struct ProbArgs {
  std::string expr;
  int depth = 0;
  std::string measure = "chart";
  std::string method = "analytic";
  std::int64_t samples = 1000000;
  std::uint64_t seed = 0;
};

int cmd_pfn_prob(const ProbArgs& a, std::ostream& out, spdlog::logger& log) {
  return guarded(log, a.expr, [&] {
    const auto e = parse_expr(a.expr, a.depth);
    const Measure measure = a.measure == "sphere" ? Measure::sphere_area : Measure::chart_uniform;
    const ProbabilityMethod method =
        a.method == "mc" ? ProbabilityMethod::monte_carlo : ProbabilityMethod::analytic;
    const double p = outcome_probability(e, measure, method, a.samples, a.seed);
    json result = {{"expr", render(e)},
                   {"memory_depth", a.depth},
                   {"measure", std::string(to_string(measure))},
                   {"method", std::string(to_string(method))},
                   {"p_up", p}};
    if (method == ProbabilityMethod::monte_carlo) {
      result["samples"] = a.samples;
      result["seed"] = a.seed;
    }
    out << result.dump() << '\n';
    return kExitOk;
  });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);

  CLI::App app{"Entropy-constrained spin collapse solver and observer automaton", "collapse"};
  app.require_subcommand(1);

  InstanceArgs solve_args;
  bool solve_json = false;
  auto* solve = app.add_subcommand("solve", "solve one collapse instance");
  add_instance_options(*solve, solve_args);
  solve->add_option("--method", solve_args.method, "grid, closed or both")
      ->check(CLI::IsMember({"grid", "closed", "both"}))
      ->capture_default_str();
  solve->add_flag("--json", solve_json, "print the full solution as JSON");

  InstanceArgs trace_args;
  std::string trace_out;
  auto* trace = app.add_subcommand("trace", "write the level-set polylines of one instance as CSV");
  add_instance_options(*trace, trace_args);
  trace->add_option("--out", trace_out, "CSV output path")->required();

  std::string run_config;
  auto* run = app.add_subcommand("run", "iterate the observer automaton from a JSON config");
  run->add_option("config", run_config, "config file")->required();

  auto* pfn = app.add_subcommand("pfn", "P function utilities");
  pfn->require_subcommand(1);

  std::string table_expr;
  int table_depth = 0;
  auto* table = pfn->add_subcommand("table", "print the truth table of an expression as hex");
  table->add_option("--expr", table_expr, "boolean expression")->required();
  table->add_option("-n,--n", table_depth, "memory depth")->capture_default_str();

  std::string nf_hex;
  int nf_depth = 0;
  auto* dnf = pfn->add_subcommand("dnf", "canonical DNF of a hex truth table");
  auto* cnf = pfn->add_subcommand("cnf", "canonical CNF of a hex truth table");
  for (auto* cmd : {dnf, cnf}) {
    cmd->add_option("--table", nf_hex, "hex truth table")->required();
    cmd->add_option("-n,--n", nf_depth, "memory depth")->capture_default_str();
  }

  ProbArgs prob_args;
  auto* prob = pfn->add_subcommand("prob", "probability of the up outcome");
  prob->add_option("--expr", prob_args.expr, "boolean expression")->required();
  prob->add_option("-n,--n", prob_args.depth, "memory depth")->capture_default_str();
  prob->add_option("--measure", prob_args.measure, "chart or sphere")
      ->check(CLI::IsMember({"chart", "sphere"}))
      ->capture_default_str();
  prob->add_option("--method", prob_args.method, "analytic or mc")
      ->check(CLI::IsMember({"analytic", "mc"}))
      ->capture_default_str();
  prob->add_option("--samples", prob_args.samples, "Monte Carlo samples")->capture_default_str();
  prob->add_option("--seed", prob_args.seed, "Monte Carlo seed")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*solve) return cmd_solve(solve_args, solve_json, out, *log);
  if (*trace) return cmd_trace(trace_args, trace_out, out, *log);
  if (*run) return cmd_run(run_config, out, *log);
  if (*table) return cmd_pfn_table(table_expr, table_depth, out, *log);
  if (*dnf) return cmd_pfn_normal_form(nf_hex, nf_depth, true, out, *log);
  if (*cnf) return cmd_pfn_normal_form(nf_hex, nf_depth, false, out, *log);
  if (*prob) return cmd_pfn_prob(prob_args, out, *log);
  return kExitUsage;
}

}  // namespace collapse::cli
