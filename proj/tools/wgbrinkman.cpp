// Command-line front end: convergence studies on manufactured solutions,
// porous-media flow solves with raster permeability, and the built-in
// diagnostics suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wg/config.hpp"
#include "wg/csv.hpp"
#include "wg/diagnostics.hpp"
#include "wg/testcases.hpp"
#include "wg/vtk.hpp"

namespace {

/// Loads --config (if present) before CLI11 sees the flags, so that explicit
/// flags override file values simply by writing into the same RunConfig.
wg::RunConfig preload_config(int argc, char** argv) {
  wg::RunConfig config;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      wg::load_config_file(config, argv[i + 1]);
    } else if (arg.rfind("--config=", 0) == 0) {
      wg::load_config_file(config, arg.substr(9));
    }
  }
  return config;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) {
    throw wg::InvalidData("cannot write output file '" + path + "'");
  }
}

int run_converge(const wg::RunConfig& config) {
  if (config.example != 1) {
    throw wg::InvalidProblem("converge: only --example 1 (manufactured solution) is available");
  }
  wg::TestCase tc = wg::manufactured_case(config.a, config.mu, config.stab_visc);
  tc.problem.kappa_sampling = config.kappa_sampling_value(wg::KappaSampling::quadrature);
  const wg::SolveOptions options = config.solve_options();
  const wg::Diagonal diagonal = config.diagonal_value();

  wg::ErrorReport report;
  std::string failure_note;
  for (int n : config.sizes) {
    try {
      const wg::CaseRun run = wg::run_case(tc, n, config.order, diagonal, options);
      report.rows.push_back(run.errors);
      std::fprintf(stderr, "n=%-4d  h=%.6g  iterations=%d  residual=%.3e  wall=%.2fs\n", n,
                   run.errors.h, run.solve.iterations, run.solve.relative_residual,
                   run.solve.wall_seconds);
    } catch (const wg::SolveFailure& failure) {
      failure_note = "# solve failed at n=" + std::to_string(n) + ": " + failure.what();
      std::fprintf(stderr, "%s\n", failure_note.c_str() + 2);
      break;
    }
  }

  std::string table = wg::format_error_table(report);
  if (!failure_note.empty()) table += failure_note + "\n";
  if (config.out.empty()) {
    std::cout << table;
  } else {
    write_text_file(config.out, table);
    std::cout << table;
    std::cout << "wrote " << config.out << "\n";
  }
  return failure_note.empty() ? 0 : 2;
}

int run_solve(const wg::RunConfig& config, const std::string& traces_path) {
  const wg::PermeabilityField permeability = wg::parse_permeability_spec(config.perm);
  wg::BrinkmanProblem problem = wg::porous_flow_problem(
      permeability, config.mu, config.lid, config.lid_top_only, config.stab_visc);
  problem.kappa_sampling = config.kappa_sampling_value(wg::KappaSampling::centroid);

  const wg::Mesh mesh = wg::build_structured(config.n, config.diagonal_value());
  const wg::FeSpace space(mesh, config.order);
  const wg::SaddleSystem system = wg::assemble(space, problem);
  const wg::SolveResult result = wg::solve(system, config.solve_options());

  const double pressure_mean =
      system.c.dot(result.pressure.coeffs) / system.domain_area;
  std::fprintf(stderr,
               "n=%d  unknowns=%d  iterations=%d  residual=%.3e  divergence=%.3e  "
               "pressure mean=%.3e  wall=%.2fs\n",
               config.n, (int)system.total_dim(), result.report.iterations,
               result.report.relative_residual, result.report.divergence_residual,
               pressure_mean, result.report.wall_seconds);

  if (!config.out.empty()) {
    const wg::CellData data =
        wg::collect_cell_data(space, problem, result.velocity, result.pressure);
    wg::write_vtk(config.out, mesh, data);
    std::cout << "wrote " << config.out << "\n";
  }

  if (!traces_path.empty()) {
    std::ofstream out(traces_path);
    if (!out) throw wg::InvalidData("cannot write trace file '" + traces_path + "'");
    out.precision(12);
    out << "edge,mid_x,mid_y,ub_x,ub_y\n";
    for (int e = 0; e < mesh.n_edges(); ++e) {
      const wg::Vec2 mid = mesh.edge_midpoint(e);
      const wg::Vec2 ub = wg::eval_trace(space, e, result.velocity, 0.0);
      out << e << "," << mid.x() << "," << mid.y() << "," << ub.x() << "," << ub.y() << "\n";
    }
    std::cout << "wrote " << traces_path << "\n";
  }
  return 0;
}

int run_verify(const wg::RunConfig& config, int only_order, const std::string& fault_name) {
  wg::FaultInjection fault = wg::FaultInjection::none;
  if (fault_name == "edge-sign") {
    fault = wg::FaultInjection::edge_sign;
  } else if (!fault_name.empty()) {
    throw wg::ParseError("--inject-fault: unknown fault '" + fault_name + "'");
  }

  std::vector<int> orders = {1, 2};
  if (only_order > 0) orders = {only_order};

  bool all_pass = true;
  for (int order : orders) {
    std::printf("order k=%d\n", order);
    for (const wg::CheckResult& check : wg::run_diagnostics(order, config.seed, fault)) {
      std::printf("  [%s] %-34s observed %.3e  (bound %.3e)\n",
                  check.pass() ? "ok" : "FAIL", check.name.c_str(), check.observed,
                  check.bound);
      all_pass = all_pass && check.pass();
    }
  }
  std::printf("%s\n", all_pass ? "all checks passed" : "CHECKS FAILED");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    wg::RunConfig config = preload_config(argc, argv);

    CLI::App app{"weak Galerkin solver for the Brinkman equations on [0,1]^2"};
    app.require_subcommand(1);

    const auto add_common = [&config](CLI::App* cmd) {
      cmd->add_option("--config", "key=value file applied before flags (flags win)")
          ->check(CLI::ExistingFile);
      cmd->add_option("--method", config.method, "linear solver: minres | direct");
      cmd->add_option("--tol", config.tol, "relative residual tolerance");
      cmd->add_option("--max-iter", config.max_iterations, "iteration budget");
      cmd->add_option("--precond", config.precond, "preconditioner: diag | none");
      cmd->add_option("--diagonal", config.diagonal, "triangulation diagonal: ne_sw | nw_se");
      cmd->add_option("--order", config.order, "polynomial order k >= 1");
      cmd->add_option("--kappa-sampling", config.kappa_sampling,
                      "Darcy coefficient sampling: auto | quadrature | centroid");
    };

    CLI::App* converge =
        app.add_subcommand("converge", "manufactured-solution convergence table");
    add_common(converge);
    converge->add_option("--example", config.example, "manufactured example id (1)");
    converge->add_option("--a", config.a, "inverse permeability amplitude");
    converge->add_option("--mu", config.mu, "viscosity");
    std::string sizes_arg;
    converge->add_option("--sizes", sizes_arg, "comma-separated mesh sizes, e.g. 16,24,32");
    std::string stab_arg;
    converge->add_option("--stab-visc", stab_arg, "scale stabilizer by viscosity: on | off (default off)");
    converge->add_option("--out", config.out, "output CSV path (default: stdout)");

    CLI::App* solve = app.add_subcommand("solve", "porous-media lid flow solve");
    add_common(solve);
    solve->add_option("--perm", config.perm,
                      "permeability: constant:<v> | sine:<a> | raster:<path>[:<kmin>:<kmax>]");
    solve->add_option("--mu", config.mu, "viscosity");
    solve->add_option("--n", config.n, "mesh subdivisions per side");
    solve->add_option("--lid", config.lid, "boundary velocity magnitude g=(lid,0)");
    solve->add_flag("--lid-top-only", config.lid_top_only,
                    "apply the lid velocity on the top side only (default: whole boundary)");
    std::string stab_arg_solve;
    solve->add_option("--stab-visc", stab_arg_solve, "scale stabilizer by viscosity: on | off (default off)");
    solve->add_option("--out", config.out, "output VTK path");
    std::string traces_path;
    solve->add_option("--export-traces", traces_path, "also write edge trace values (CSV)");

    CLI::App* verify = app.add_subcommand("verify", "run the built-in diagnostics suite");
    verify->add_option("--seed", config.seed, "random seed for property checks");
    int verify_order = 0;
    verify->add_option("--order", verify_order, "restrict to one polynomial order");
    std::string fault_name;
    verify->add_option("--inject-fault", fault_name, "corrupt internal state (testing hook)")
        ->group("");  // hidden

    CLI11_PARSE(app, argc, argv);

    if (!sizes_arg.empty()) {
      wg::apply_config_entry(config, "sizes", sizes_arg);
    }
    if (!stab_arg.empty()) wg::apply_config_entry(config, "stab_visc_scaling", stab_arg);
    if (!stab_arg_solve.empty())
      wg::apply_config_entry(config, "stab_visc_scaling", stab_arg_solve);

    if (converge->parsed()) return run_converge(config);
    if (solve->parsed()) return run_solve(config, traces_path);
    if (verify->parsed()) return run_verify(config, verify_order, fault_name);
    return 1;
  } catch (const wg::SolveFailure& failure) {
    std::fprintf(stderr, "error: %s\n", failure.what());
    return 3;
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  }
}
