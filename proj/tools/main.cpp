#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "commands.hpp"
#include "deadcore/errors.hpp"

using namespace deadcore;

int main(int argc, char** argv) {
  CLI::App app{"dead-core systems and Henon equations: exact solutions, solvers and free boundary diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out = ".";
  std::uint64_t seed = 20240611;
  bool parallel = false, sequential = false;
  app.add_option("--config", config_path, "config file (key = value with [sections])");
  app.add_option("--out", out, "output directory (must exist)");
  app.add_option("--seed", seed, "seed for randomized suites");
  auto* seq = app.add_flag("--sequential", sequential, "sequential kernels (default)");
  auto* par = app.add_flag("--parallel", parallel, "OpenMP kernels");
  seq->excludes(par);

  using Cmd = int (*)(const cli::Context&);
  const std::vector<std::tuple<std::string, std::string, Cmd>> cmds = {
      {"verify-exact", "residual suite of the closed-form solutions", cli::cmd_verify_exact},
      {"solve-radial", "radial system or Henon solve", cli::cmd_solve_radial},
      {"solve-grid", "2D penalized dead-core continuation and free boundary report", cli::cmd_solve_grid},
      {"solve-henon", "2D Henon solve with non-degeneracy and gradient checks", cli::cmd_solve_henon},
      {"fit", "free boundary report for stored fields", cli::cmd_fit},
      {"liouville", "Liouville threshold and optional decay check", cli::cmd_liouville},
      {"blowup", "blow-up rescaling at a point", cli::cmd_blowup},
  };
  Cmd chosen = nullptr;
  for (const auto& [name, help, fn] : cmds) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&chosen, f = fn]() { chosen = f; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cli::Context ctx;
    ctx.out = out;
    ctx.seed = seed;
    ctx.exec = parallel ? Exec::parallel : Exec::sequential;
    if (!std::filesystem::is_directory(out)) throw ArgumentError("output directory does not exist: " + out);
    if (!config_path.empty()) ctx.cfg = Config::load(config_path);
    return chosen(ctx);
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual " << e.last_residual() << ", iterations "
              << e.iterations() << ")\n";
    return 1;
  } catch (const FitUnavailableError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const ResolutionError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const StencilError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
