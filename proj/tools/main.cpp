// Command line front end: batch experiments over random starting points and
// point diagnostics for MPCC instances.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <memory>
#include <string>

#include "mstat/harness.hpp"
#include "mstat/lq_problem.hpp"

namespace {

struct ProblemSelection {
  std::string name = "toy";
  double toy_c = 0.1;
  double perturbed_eps = 0.2;
  mstat::Index obstacle_n = 256;

  std::shared_ptr<const mstat::MpccProblem> problem;
  mstat::Vector reference;  // known primal solution, empty if unknown

  void resolve() {
    if (name == "toy") {
      problem = mstat::make_toy(toy_c);
      reference = mstat::Vector::Zero(3);
    } else if (name == "perturbed") {
      problem = mstat::make_perturbed(perturbed_eps);
      reference = mstat::Vector::Zero(2);
      reference(0) = 1.0;
    } else if (name == "obstacle") {
      problem = mstat::make_obstacle(obstacle_n);
      reference = mstat::Vector::Zero(3 * obstacle_n);
    } else {
      const auto loaded = mstat::load_lq_problem(name);
      if (loaded.symmetrized_q) {
        std::fprintf(stderr,
                     "warning: Q in '%s' was not symmetric; using its "
                     "symmetric part\n",
                     name.c_str());
      }
      problem = loaded.problem;
    }
  }
};

void add_problem_options(CLI::App& cmd, ProblemSelection& sel) {
  cmd.add_option("--problem", sel.name,
                 "builtin problem (toy|perturbed|obstacle) or path to a "
                 "linear-quadratic problem file")
      ->required();
  cmd.add_option("--c", sel.toy_c, "regularization parameter of the toy problem");
  cmd.add_option("--eps", sel.perturbed_eps,
                 "perturbation parameter of the perturbed problem");
  cmd.add_option("--N", sel.obstacle_n, "discretization size of the obstacle problem");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semismooth Newton solver for M-stationary points of MPCCs"};
  app.require_subcommand(1);

  ProblemSelection sel;
  mstat::ExperimentConfig config;
  std::string point_path;

  CLI::App* solve = app.add_subcommand("solve", "run seeded batch experiments");
  add_problem_options(*solve, sel);
  solve->add_option("--runs", config.runs, "number of runs")->required();
  solve->add_option("--seed", config.master_seed, "master seed")->required();
  solve->add_option("--tol", config.options.tau_abs, "residual stopping tolerance");
  solve->add_option("--max-iter", config.options.max_iter, "iteration cap per run");
  solve->add_flag("--stat-stop", config.options.enable_stationarity_stop,
                  "also stop when |grad merit| <= tau-stat");
  solve->add_option("--tau-stat", config.options.tau_stat,
                    "threshold for the stationarity stop");
  bool no_lq_repair = false;
  solve->add_flag("--no-lq-repair", no_lq_repair,
                  "disable the active-set repair of singular Newton systems");
  solve->add_option("--threads", config.threads, "worker threads");
  solve->add_option("--out", config.output_path, "CSV output path")->required();

  CLI::App* diagnose =
      app.add_subcommand("diagnose", "stationarity and regularity report");
  add_problem_options(*diagnose, sel);
  diagnose
      ->add_option("--point", point_path,
                   "JSON point file with vectors x, lambda, eta, mu, nu")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    sel.resolve();
    if (solve->parsed()) {
      config.problem = sel.problem;
      config.problem_name = sel.name;
      config.options.lq_repair = !no_lq_repair;
      config.reference_primal = sel.reference;

      const auto [records, summary] = mstat::run_experiment(config);
      std::printf("runs:                %lld\n",
                  static_cast<long long>(summary.runs));
      std::printf("converged_residual:  %lld\n",
                  static_cast<long long>(summary.converged_residual));
      std::printf("stationary_merit:    %lld\n",
                  static_cast<long long>(summary.stationary_merit));
      std::printf("max_iter:            %lld\n",
                  static_cast<long long>(summary.max_iter));
      std::printf("line_search_failure: %lld\n",
                  static_cast<long long>(summary.line_search_failure));
      std::printf("mean iterations:     %.3f\n", summary.mean_iterations);
      std::printf("median iterations:   %.1f\n", summary.median_iterations);
      std::printf("mean primal error:   %.3e\n", summary.mean_primal_error);
      std::printf("mean wall time:      %.3f ms\n", summary.mean_wall_time_ms);
      std::printf("records written to:  %s\n", config.output_path.c_str());
    } else {
      const mstat::PrimalDual z =
          mstat::load_point_file(point_path, sel.problem->dims());
      const mstat::DiagnoseReport rep = mstat::diagnose(*sel.problem, z);
      std::fputs(mstat::format_diagnose(rep).c_str(), stdout);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
