// minq: measurement-induced nonlocality measures from the command line.
//
//   minq compute --state bell.state --measures FMIN_AB,HS_MIN
//   minq sweep --family symmetric_bd --grid 0:0.333333333:3 --measures FMIN_AB --out -
//   minq verify --suite bounds --trials 100 --seed 7

#include <iostream>

#include "CLI11.hpp"
#include "minq/cli.hpp"

namespace {

void add_optimizer_flags(CLI::App* cmd, minq::OptimizerConfig& cfg) {
  cmd->add_option("--starts", cfg.starts, "multistart count")->capture_default_str();
  cmd->add_option("--max-iters", cfg.max_iters, "simplex iterations per pass")->capture_default_str();
  cmd->add_option("--ftol", cfg.ftol, "convergence threshold on the objective")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  cmd->add_option("--degeneracy-tol", cfg.degeneracy_tol, "eigenvalue gap merged into one block")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-induced nonlocality of bipartite quantum states"};
  app.require_subcommand(1);

  minq::cli::ComputeOptions compute;
  auto* compute_cmd = app.add_subcommand("compute", "evaluate measures on a state file");
  compute_cmd->add_option("--state,state", compute.state_path, "state file")->required();
  compute_cmd->add_option("--measures", compute.measures, "comma-separated measure ids, or 'all'")
      ->delimiter(',')
      ->capture_default_str();
  compute_cmd->add_option("--tol", compute.tol, "report tolerance")->capture_default_str();
  add_optimizer_flags(compute_cmd, compute.cfg);

  minq::cli::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate measures over a state family grid, writing CSV");
  sweep_cmd->add_option("--family", sweep.family, "bell_diagonal | werner | isotropic | symmetric_bd")->required();
  sweep_cmd->add_option("--grid", sweep.grid, "start:stop:steps, once per family parameter")->required();
  sweep_cmd->add_option("--measures", sweep.measures, "comma-separated measure ids")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--dim", sweep.dim, "local dimension for werner/isotropic")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out_path, "output CSV path, '-' for stdout")->capture_default_str();
  add_optimizer_flags(sweep_cmd, sweep.cfg);

  minq::cli::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "run the randomized property suites");
  verify_cmd->add_option("--suite", verify.suite, "all | invariants | bounds | closed_forms | ancilla")
      ->capture_default_str();
  verify_cmd->add_option("--trials", verify.trials, "trials per property")->capture_default_str();
  add_optimizer_flags(verify_cmd, verify.cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : minq::cli::kInputError;
  }

  if (compute_cmd->parsed()) return minq::cli::run_compute(compute, std::cout, std::cerr);
  if (sweep_cmd->parsed()) return minq::cli::run_sweep(sweep, std::cout, std::cerr);
  return minq::cli::run_verify(verify, std::cout, std::cerr);
}
