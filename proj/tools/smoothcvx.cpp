// smoothcvx: verification runs and plot data for the smooth convex
// counterexample and the chain bounds.

#include "smoothcvx/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
  using namespace smoothcvx;
  RunConfig cfg;
  CLI::App app{"Smooth convex counterexample verification and chain bounds"};
  app.require_subcommand(1);

  std::string format = "csv";
  app.add_option("--out", cfg.out, "Output file (written atomically); standard output if omitted");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--seed", cfg.seed, "Seed for every randomized check");
  app.add_option("--workers", cfg.workers, "Worker threads for sweep")->check(CLI::PositiveNumber);
  app.add_option("--barrier-mu0", cfg.solver.barrier_mu0, "Initial barrier weight");
  app.add_option("--mu-shrink", cfg.solver.mu_shrink, "Barrier weight reduction factor");
  app.add_option("--newton-tol", cfg.solver.newton_tol, "Duality gap target");
  app.add_option("--max-outer", cfg.solver.max_outer, "Maximum barrier iterations");
  app.add_option("--max-newton", cfg.solver.max_newton, "Maximum Newton steps per centering");
  app.add_option("--feas-tol", cfg.solver.feas_tol, "Feasibility tolerance");
  bool no_reduce = false;
  app.add_flag("--no-reduce", no_reduce, "Solve in ambient coordinates instead of span{y - x, g_x, g_y}");

  auto* verify = app.add_subcommand("verify", "Exact and sampled checks of the counterexample");
  verify->add_option("--grid-spacing", cfg.grid_spacing, "Lattice spacing as a rational, e.g. 1/32");
  verify->add_option("--perturb-piece", cfg.perturb_piece)->group("");
  verify->add_option("--perturb-constant", cfg.perturb_constant)->group("");

  auto* contour = app.add_subcommand("contour", "Values and piece indices of F on a grid");
  contour->add_option("--xmin", cfg.contour.xmin, "Rational or decimal");
  contour->add_option("--xmax", cfg.contour.xmax, "Rational or decimal");
  contour->add_option("--ymin", cfg.contour.ymin, "Rational or decimal, above -23/240");
  contour->add_option("--ymax", cfg.contour.ymax, "Rational or decimal");
  contour->add_option("--nx", cfg.contour.nx, "Cells along x0");
  contour->add_option("--ny", cfg.contour.ny, "Cells along x1");

  auto* region = app.add_subcommand("region", "Global-bound and Descent Lemma regions");
  region->add_option("--steps", cfg.region_steps, "Number of t intervals");

  auto* sweep_cmd = app.add_subcommand("sweep", "B_N and U_N over a grid of <g_y, y>");
  sweep_cmd->add_option("--s-min", cfg.sweep.s_min);
  sweep_cmd->add_option("--s-max", cfg.sweep.s_max);
  sweep_cmd->add_option("--s-steps", cfg.sweep.s_steps);
  sweep_cmd->add_option("--N-list", cfg.sweep.N_list, "Comma separated chain lengths")->delimiter(',');

  auto* solve_cmd = app.add_subcommand("solve", "Solve one chain program from a JSON spec");
  solve_cmd->add_option("--in", cfg.input, "ChainSpec JSON")->required();

  auto* interp = app.add_subcommand("interpolate", "Sample the segment interpolant of a solved chain");
  interp->add_option("--in", cfg.input, "ChainSpec JSON")->required();
  interp->add_option("--t-steps", cfg.t_steps, "Number of t intervals");
  double lambda = 0.0;
  auto* lambda_opt = interp->add_option("--lambda", lambda, "Weight on F_u in the combination");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::bad_input;
  }

  static const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}, {"svg", Format::Svg}};
  cfg.format = formats.at(format);
  cfg.reduce = !no_reduce;
  if (*lambda_opt) cfg.lambda = lambda;

  if (*verify) {
    cfg.command = Command::Verify;
  } else if (*contour) {
    cfg.command = Command::Contour;
  } else if (*region) {
    cfg.command = Command::Region;
  } else if (*sweep_cmd) {
    cfg.command = Command::Sweep;
  } else if (*solve_cmd) {
    cfg.command = Command::Solve;
  } else {
    cfg.command = Command::Interpolate;
  }
  return run(cfg);
}
