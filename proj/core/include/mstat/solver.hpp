#pragma once

#include <vector>

#include "mstat/problem.hpp"
#include "mstat/types.hpp"

namespace mstat {

struct SolveOptions {
  double q = 0.999;            // ratio-test threshold for full Newton steps
  double tau_abs = 1e-11;      // residual stopping tolerance (sup norm)
  double rho = 1e-3;           // angle-test parameter
  double sigma = 0.5;          // Armijo slope fraction
  double beta = 0.5;           // Armijo backtracking factor
  Index max_iter = 1000;
  Index max_backtracks = 60;   // smallest admissible step is beta^60
  double singular_rcond = 1e-12;  // below this the Newton system counts as
                                  // not well defined
  bool enable_stationarity_stop = false;
  double tau_stat = 1e-9;      // |grad merit| threshold for the extra stop
  bool lq_repair = true;       // degenerate-system repair on singular Newton
                               // systems of linear-quadratic problems
};

enum class SolveStatus {
  converged_residual,
  stationary_merit,
  max_iter,
  line_search_failure,
};

const char* to_string(SolveStatus s);

enum class StepKind {
  newton_full,               // full Newton step accepted by the ratio test
  newton_damped,             // Newton direction, Armijo step length
  gradient,                  // steepest descent, Newton system singular
  newton_rejected_gradient,  // steepest descent after a failed angle test
  lq_repaired,               // full step from the repaired active-set system
};

const char* to_string(StepKind k);

struct StepRecord {
  StepKind kind = StepKind::newton_full;
  double step_length = 1.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::max_iter;
  Index iterations = 0;
  std::vector<StepRecord> step_log;
  PrimalDual final_z;
  double final_residual_norm = 0.0;   // sup norm of F
  double final_merit = 0.0;
  double final_merit_grad_norm = 0.0;
  std::vector<double> residual_history;  // |F(z_k)|_inf per iterate
  std::vector<double> merit_history;     // merit per iterate, nonincreasing
  double wall_time_s = 0.0;
};

struct NewtonStep {
  bool singular = false;
  double rcond = 0.0;
  Vector direction;  // empty when singular
};

/// Solves the Newton system DF(z) d = -F(z) with a partially pivoted LU
/// factorization. Singularity is a value, not an error: the step is flagged
/// singular when the reciprocal condition estimate falls below
/// singular_rcond.
NewtonStep newton_direction(const MpccProblem& problem, const PrimalDual& z,
                            double singular_rcond = 1e-12);

/// Pure Newton iteration without globalization; stops at |F|_inf <= tau_abs,
/// on max_iter, or on a singular system (reported as line_search_failure).
SolveReport solve_local(const MpccProblem& problem, const PrimalDual& z0,
                        const SolveOptions& opts = {});

/// Globalized semismooth Newton method: full Newton steps under a merit
/// ratio test, otherwise an Armijo line search along the Newton direction or
/// the negative merit gradient, with optional repair of singular systems for
/// linear-quadratic problems.
SolveReport solve_global(const MpccProblem& problem, const PrimalDual& z0,
                         const SolveOptions& opts = {});

}  // namespace mstat
