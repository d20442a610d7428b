// zerocap: zero-error capacities and simulation costs of quantum channels
// under no-signalling assistance, computed from JSON channel/graph specs.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "zerocap/nosig.hpp"
#include "zerocap/quantities.hpp"
#include "zerocap/regress.hpp"
#include "zerocap/spec_io.hpp"

using namespace zerocap;

namespace {

enum ExitCode { kOk = 0, kSolverFailure = 1, kSpecError = 2, kInfeasible = 3 };

struct OutputOptions {
  bool json = false;
  bool csv = false;
  std::string dump_witness;
};

double elapsed(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ReportRow make_row(const std::string& name, const QuantityResult& q, double seconds) {
  ReportRow row;
  row.quantity = name;
  row.value = q.value;
  row.integer_part = q.integer_part;
  row.bits = q.value > 0 ? std::log2(q.value) : 0.0;
  row.gap = q.crosscheck_gap;
  row.status = to_string(q.status);
  row.seconds = seconds;
  return row;
}

ReportRow make_row(const std::string& name, double value, double seconds,
                   const std::string& status = "optimal") {
  ReportRow row;
  row.quantity = name;
  row.value = value;
  row.integer_part = static_cast<long long>(std::floor(snap_integer(value)));
  row.bits = value > 0 ? std::log2(value) : 0.0;
  row.status = status;
  row.seconds = seconds;
  return row;
}

void emit(std::vector<ReportRow> rows, const OutputOptions& out) {
  if (!out.dump_witness.empty() && !rows.empty()) rows.front().witness_file = out.dump_witness;
  if (out.csv) {
    std::cout << to_csv(rows);
  } else if (out.json) {
    std::cout << to_json(rows) << "\n";
  } else {
    for (const auto& r : rows) {
      std::cout << r.quantity << " = " << r.value << "  (integer_part " << r.integer_part
                << ", bits " << r.bits << ", gap " << r.gap << ", " << r.status << ", "
                << r.seconds << "s)\n";
    }
  }
}

void dump_witnesses(const std::string& path, const QuantityResult& q) {
  nlohmann::json j;
  for (const auto& [name, w] : q.primal_witnesses)
    j["primal"][name] = nlohmann::json::parse(matrix_to_json(w.mat()));
  for (const auto& [name, w] : q.dual_witnesses)
    j["dual"][name] = nlohmann::json::parse(matrix_to_json(w.mat()));
  std::ofstream out(path);
  if (!out) throw spec_error("cannot write witness file '" + path + "'");
  out << j.dump(2) << "\n";
}

int fail(ExitCode code, const std::string& tag, const std::string& message) {
  std::cerr << "error: " << tag << ": " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-error capacities of quantum channels under no-signalling assistance"};
  app.require_subcommand(1);
  app.fallthrough();

  SolveOptions solve_opts;
  if (const char* env = std::getenv("ZEROCAP_GAP_TOL")) solve_opts.gap_tol = std::atof(env);
  OutputOptions out;
  std::uint64_t seed = 20151130;

  app.add_option("--gap-tol", solve_opts.gap_tol, "duality gap tolerance");
  app.add_option("--feas-tol", solve_opts.feas_tol, "feasibility tolerance");
  app.add_flag("--json", out.json, "emit JSON");
  app.add_flag("--csv", out.csv, "emit CSV");
  app.add_option("--dump-witness", out.dump_witness, "write optimizer witnesses to a JSON file");
  app.add_option("--seed", seed, "seed for the randomized suites");

  std::string spec_path, quantity_name;
  int copies = 1, messages = 1, points = 9;
  bool simulate = false, quick = false;

  auto* cap = app.add_subcommand("capacity", "independence number, superdense bound, feasibility");
  cap->add_option("spec", spec_path)->required();

  auto* sim = app.add_subcommand("simcost", "simulation cost of the graph and its channel");
  sim->add_option("spec", spec_path)->required();

  auto* pack = app.add_subcommand("packing", "semidefinite packing numbers");
  pack->add_option("spec", spec_path)->required();

  auto* theta = app.add_subcommand("theta", "Lovasz number of a classical graph");
  theta->add_option("spec", spec_path)->required();

  auto* astar = app.add_subcommand("alphastar", "fractional packing number of a classical channel");
  astar->add_option("spec", spec_path)->required();

  auto* pow = app.add_subcommand("power", "quantity on the n-fold tensor power");
  pow->add_option("spec", spec_path)->required();
  pow->add_option("quantity", quantity_name, "upsilon|sigma|aram|aram_tilde")->required();
  pow->add_option("-n,--copies", copies, "tensor copies (at most 3)")->required();

  auto* verify = app.add_subcommand("verify", "build and verify a code or simulation");
  verify->add_option("spec", spec_path)->required();
  verify->add_option("-M,--messages", messages)->required();
  verify->add_flag("--simulate", simulate, "verify a simulation instead of a code");

  auto* sweep = app.add_subcommand("sweep", "two-state closed-form sweep as CSV");
  std::string family = "two_state";
  sweep->add_option("family", family, "only 'two_state'");
  sweep->add_option("--points", points, "sample count over beta^2 in (0, 0.5)");

  auto* regress = app.add_subcommand("regress", "full acceptance suite");
  regress->add_flag("--quick", quick, "trimmed randomized suites");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<ReportRow> rows;
    const auto start = std::chrono::steady_clock::now();

    if (cap->parsed()) {
      const ParsedSpec spec = load_spec(spec_path);
      if (!spec.graph.P.dim()) throw spec_error("capacity: spec does not define a Kraus space");
      const QuantityResult u = upsilon(spec.graph, solve_opts);
      rows.push_back(make_row("upsilon", u, elapsed(start)));
      rows.push_back(make_row("superdense_bound", superdense_bound(spec.graph), 0.0));
      const FeasibilityReport f = feasibility(spec.graph);
      rows.push_back(make_row("feasible", f.positive_capacity ? 1.0 : 0.0, 0.0));
      if (!out.dump_witness.empty()) dump_witnesses(out.dump_witness, u);
      emit(rows, out);
      return u.ok() ? kOk : kSolverFailure;
    }

    if (sim->parsed()) {
      const ParsedSpec spec = load_spec(spec_path);
      if (!spec.graph.P.dim()) throw spec_error("simcost: spec does not define a Kraus space");
      const QuantityResult sk = sigma_graph(spec.graph, solve_opts);
      rows.push_back(make_row("sigma_graph", sk, elapsed(start)));
      bool ok = sk.ok();
      if (spec.channel) {
        const auto t0 = std::chrono::steady_clock::now();
        const QuantityResult sn = sigma_channel(*spec.channel, solve_opts);
        rows.push_back(make_row("sigma_channel", sn, elapsed(t0)));
        rows.push_back(make_row("hmin", -std::log2(sn.value), 0.0, to_string(sn.status)));
        ok = ok && sn.ok();
      }
      if (!out.dump_witness.empty()) dump_witnesses(out.dump_witness, sk);
      emit(rows, out);
      return ok ? kOk : kSolverFailure;
    }

    if (pack->parsed()) {
      const ParsedSpec spec = load_spec(spec_path);
      if (!spec.graph.P.dim()) throw spec_error("packing: spec does not define a Kraus space");
      const QuantityResult a = aram(spec.graph, solve_opts);
      const QuantityResult at = aram_tilde(spec.graph, solve_opts);
      const QuantityResult ah = aram_hat(spec.graph, solve_opts);
      rows.push_back(make_row("aram", a, elapsed(start)));
      rows.push_back(make_row("aram_tilde", at, 0.0));
      rows.push_back(make_row("aram_hat", ah, 0.0));
      rows.push_back(make_row("aram_times_hat", a.value * ah.value, 0.0));
      if (!out.dump_witness.empty()) dump_witnesses(out.dump_witness, a);
      emit(rows, out);
      return a.ok() && at.ok() && ah.ok() ? kOk : kSolverFailure;
    }

    if (theta->parsed()) {
      const ParsedSpec spec = load_spec(spec_path);
      if (!spec.classical_graph) throw spec_error("theta: spec must have type 'graph'");
      const QuantityResult q = lovasz_theta(*spec.classical_graph, solve_opts);
      rows.push_back(make_row("theta", q, elapsed(start)));
      if (!out.dump_witness.empty()) dump_witnesses(out.dump_witness, q);
      emit(rows, out);
      return q.ok() ? kOk : kSolverFailure;
    }

    if (astar->parsed()) {
      const ParsedSpec spec = load_spec(spec_path);
      if (!spec.transition) throw spec_error("alphastar: spec must have type 'classical'");
      const QuantityResult q = fractional_packing(*spec.transition, solve_opts);
      rows.push_back(make_row("alphastar", q, elapsed(start)));
      if (!out.dump_witness.empty()) dump_witnesses(out.dump_witness, q);
      emit(rows, out);
      return q.ok() ? kOk : kSolverFailure;
    }

    if (pow->parsed()) {
      if (copies < 1 || copies > 3) throw spec_error("power: copies must lie in [1, 3]");
      const ParsedSpec spec = load_spec(spec_path);
      if (!spec.graph.P.dim()) throw spec_error("power: spec does not define a Kraus space");
      const NCGraph kn = power(spec.graph, copies);
      QuantityResult q;
      if (quantity_name == "upsilon") {
        q = upsilon(kn, solve_opts);
      } else if (quantity_name == "sigma") {
        q = sigma_graph(kn, solve_opts);
      } else if (quantity_name == "aram") {
        q = aram(kn, solve_opts);
      } else if (quantity_name == "aram_tilde") {
        q = aram_tilde(kn, solve_opts);
      } else {
        throw spec_error("power: unknown quantity '" + quantity_name + "'");
      }
      rows.push_back(make_row(quantity_name + "_power" + std::to_string(copies), q, elapsed(start)));
      if (!out.dump_witness.empty()) dump_witnesses(out.dump_witness, q);
      emit(rows, out);
      return q.ok() ? kOk : kSolverFailure;
    }

    if (verify->parsed()) {
      const ParsedSpec spec = load_spec(spec_path);
      if (!spec.channel) throw spec_error("verify: spec does not determine a channel");
      if (simulate) {
        const SimulationReport r = verify_simulation(*spec.channel, messages, solve_opts);
        rows.push_back(make_row("ns_cp_min_eig", r.ns.cp_min_eigenvalue, elapsed(start)));
        rows.push_back(make_row("ns_tp_residual", r.ns.tp_residual, 0.0));
        rows.push_back(make_row("ns_a_to_b", r.ns.a_to_b_residual, 0.0));
        rows.push_back(make_row("ns_b_to_a", r.ns.b_to_a_residual, 0.0));
        rows.push_back(make_row("choi_distance", r.choi_distance, 0.0));
        emit(rows, out);
        return r.faithful() ? kOk : kSolverFailure;
      }
      const CodeReport r = verify_code(spec.graph, *spec.channel, messages, solve_opts);
      rows.push_back(make_row("ns_cp_min_eig", r.ns.cp_min_eigenvalue, elapsed(start)));
      rows.push_back(make_row("ns_tp_residual", r.ns.tp_residual, 0.0));
      rows.push_back(make_row("ns_a_to_b", r.ns.a_to_b_residual, 0.0));
      rows.push_back(make_row("ns_b_to_a", r.ns.b_to_a_residual, 0.0));
      rows.push_back(make_row("max_offdiagonal", r.max_offdiagonal, 0.0));
      rows.push_back(make_row("orthogonality", r.orthogonality, 0.0));
      emit(rows, out);
      return r.zero_error() ? kOk : kSolverFailure;
    }

    if (sweep->parsed()) {
      if (family != "two_state") throw spec_error("sweep: only the two_state family is supported");
      if (points < 1) throw spec_error("sweep: need at least one point");
      std::cout << "beta_sq,log_aram,cmin_e,log_sigma\n";
      std::cout.precision(12);
      for (int i = 1; i <= points; ++i) {
        const double b2 = 0.5 * i / (points + 1);
        const double a = std::sqrt(1.0 - b2);
        std::cout << b2 << "," << std::log2(1.0 / (a * a)) << "," << cmin_e_two_state(a) << ","
                  << std::log2(1.0 + 2.0 * a * std::sqrt(b2)) << "\n";
      }
      return kOk;
    }

    if (regress->parsed()) {
      RegressOptions ropts;
      ropts.solve = solve_opts;
      ropts.seed = seed;
      ropts.quick = quick;
      const auto results = run_regression(ropts, [](const CheckResult& r) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.seconds << "s)  "
                  << r.detail << "\n";
      });
      const bool ok = all_passed(results);
      std::cout << (ok ? "all checks passed" : "some checks FAILED") << "\n";
      return ok ? kOk : kSolverFailure;
    }
  } catch (const infeasible_error& e) {
    return fail(kInfeasible, "E_INFEASIBLE", e.what());
  } catch (const spec_error& e) {
    return fail(kSpecError, "E_SPEC_PARSE", e.what());
  } catch (const solver_error& e) {
    return fail(kSolverFailure, "E_SOLVER", e.what());
  } catch (const std::exception& e) {
    return fail(kSolverFailure, "E_SOLVER", e.what());
  }
  return kOk;
}
