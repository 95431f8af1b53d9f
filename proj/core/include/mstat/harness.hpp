#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mstat/problem.hpp"
#include "mstat/solver.hpp"
#include "mstat/types.hpp"

namespace mstat {

/// Batch of independent solver runs from seeded random starting points.
struct ExperimentConfig {
  std::shared_ptr<const MpccProblem> problem;
  std::string problem_name;
  Index runs = 1;
  std::uint64_t master_seed = 0;
  SolveOptions options;
  /// CSV output path; empty disables writing.
  std::string output_path;
  /// Worker threads; records are identical regardless of the thread count.
  Index threads = 1;
  /// Known primal solution used for the error column; empty when unknown.
  Vector reference_primal;
};

struct RunRecord {
  Index run_index = 0;
  std::uint64_t derived_seed = 0;
  SolveStatus status = SolveStatus::max_iter;
  Index iterations = 0;
  double final_residual_norm = 0.0;
  double final_merit_grad_norm = 0.0;
  /// Euclidean distance of the final primal point to the reference solution;
  /// NaN when no reference is configured.
  double primal_error = 0.0;
  Stationarity classification = Stationarity::not_weakly_stationary;
  double wall_time_ms = 0.0;
};

struct ExperimentSummary {
  Index runs = 0;
  Index converged_residual = 0;
  Index stationary_merit = 0;
  Index max_iter = 0;
  Index line_search_failure = 0;
  double mean_iterations = 0.0;
  double median_iterations = 0.0;
  /// Mean primal error over all runs; NaN when no reference is configured.
  double mean_primal_error = 0.0;
  double mean_wall_time_ms = 0.0;
};

/// Stream seed for one run, mixed from the master seed and the run index so
/// that runs are independent of execution order.
std::uint64_t derive_seed(std::uint64_t master_seed, Index run_index);

/// Starting point with every coordinate uniform on [-n, n], generated by a
/// counter-based generator; identical across platforms and thread counts.
PrimalDual random_start(const MpccProblem& problem, std::uint64_t seed);

std::pair<std::vector<RunRecord>, ExperimentSummary> run_experiment(
    const ExperimentConfig& config);

/// CSV columns: run,seed,status,iters,resid,merit_grad,err,class,ms
void write_csv(const std::vector<RunRecord>& records, std::ostream& out);
void write_csv(const std::vector<RunRecord>& records, const std::string& path);

struct DiagnoseReport {
  bool feasible = false;
  double ineq_violation = 0.0;
  double eq_violation = 0.0;
  double comp_violation = 0.0;
  Stationarity stationarity = Stationarity::infeasible;
  bool licq = false;
  bool relaxed_cq = false;
  /// Empty when the branch enumeration guard was exceeded.
  std::optional<bool> ssoc;
  double residual_norm = 0.0;       // |F|_inf
  double merit_value = 0.0;
  double merit_grad_norm = 0.0;
};

DiagnoseReport diagnose(const MpccProblem& problem, const PrimalDual& z);

std::string format_diagnose(const DiagnoseReport& report);

/// Reads a primal-dual point from a JSON document with fields x, lambda,
/// eta, mu, nu (decimal vectors). Vector lengths must match the dimensions.
PrimalDual load_point_file(const std::string& path, const Dims& dims);

}  // namespace mstat
