#include "mstat/solver.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>

#include "mstat/linquad.hpp"
#include "mstat/merit.hpp"
#include "mstat/residual.hpp"

namespace mstat {

namespace {

using Clock = std::chrono::steady_clock;

double merit_value(const MpccProblem& problem, const PrimalDual& z) {
  return 0.5 * assemble_residual_fb(problem, z).squaredNorm();
}


// Reciprocal condition estimate of a factorized matrix. Eigen's estimator
// alone returns garbage when a pivot is exactly zero, so combine it with
// the pivot ratio of the U factor.
double rcond_estimate(const Eigen::PartialPivLU<Matrix>& lu) {
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  if (!(dmax > 0.0)) return 0.0;
  const double pivot_ratio = diag.minCoeff() / dmax;
  double r = lu.rcond();
  if (!std::isfinite(r)) r = 0.0;
  return std::min(r, pivot_ratio);
}

PrimalDual advance(const Dims& d, const PrimalDual& z, const Vector& step,
                   double alpha) {
  return PrimalDual::unstack(d, z.stack() + alpha * step);
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged_residual: return "converged_residual";
    case SolveStatus::stationary_merit: return "stationary_merit";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::line_search_failure: return "line_search_failure";
  }
  return "unknown";
}

const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::newton_full: return "newton_full";
    case StepKind::newton_damped: return "newton_damped";
    case StepKind::gradient: return "gradient";
    case StepKind::newton_rejected_gradient: return "newton_rejected_gradient";
    case StepKind::lq_repaired: return "lq_repaired";
  }
  return "unknown";
}

NewtonStep newton_direction(const MpccProblem& problem, const PrimalDual& z,
                            double singular_rcond) {
  const ResidualEval eval = assemble_residual(problem, z);
  const NewtonMatrix newton = assemble_newton(problem, z, eval);
  Eigen::PartialPivLU<Matrix> lu(newton.DF);

  NewtonStep step;
  step.rcond = rcond_estimate(lu);
  step.singular = !(step.rcond >= singular_rcond);
  if (!step.singular) step.direction = lu.solve(-eval.F);
  return step;
}

SolveReport solve_local(const MpccProblem& problem, const PrimalDual& z0,
                        const SolveOptions& opts) {
  const auto t0 = Clock::now();
  const Dims& d = problem.dims();

  SolveReport report;
  PrimalDual z = z0;
  for (;;) {
    const ResidualEval eval = assemble_residual(problem, z);
    const double rnorm = eval.norm_inf();
    report.residual_history.push_back(rnorm);
    if (rnorm <= opts.tau_abs) {
      report.status = SolveStatus::converged_residual;
      break;
    }
    if (report.iterations >= opts.max_iter) {
      report.status = SolveStatus::max_iter;
      break;
    }
    const NewtonMatrix newton = assemble_newton(problem, z, eval);
    Eigen::PartialPivLU<Matrix> lu(newton.DF);
    if (!(rcond_estimate(lu) >= opts.singular_rcond)) {
      report.status = SolveStatus::line_search_failure;  // local failure
      break;
    }
    z = advance(d, z, lu.solve(-eval.F), 1.0);
    report.step_log.push_back({StepKind::newton_full, 1.0});
    ++report.iterations;
  }

  report.final_z = z;
  report.final_residual_norm = report.residual_history.back();
  const MeritEval merit = merit_eval(problem, z);
  report.final_merit = merit.value;
  report.final_merit_grad_norm = merit.grad_norm();
  report.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return report;
}

SolveReport solve_global(const MpccProblem& problem, const PrimalDual& z0,
                         const SolveOptions& opts) {
  const auto t0 = Clock::now();
  const Dims& d = problem.dims();
  const bool repair_applicable =
      opts.lq_repair && problem.affine_constraints() &&
      problem.quadratic_objective() &&
      dynamic_cast<const LinearQuadraticProblem*>(&problem) != nullptr;

  SolveReport report;
  PrimalDual z = z0;
  MeritEval merit = merit_eval(problem, z);

  for (;;) {
    const ResidualEval eval = assemble_residual(problem, z);
    const double rnorm = eval.norm_inf();
    report.residual_history.push_back(rnorm);
    report.merit_history.push_back(merit.value);

    if (rnorm <= opts.tau_abs) {
      report.status = SolveStatus::converged_residual;
      break;
    }
    if (opts.enable_stationarity_stop && merit.grad_norm() <= opts.tau_stat) {
      report.status = SolveStatus::stationary_merit;
      break;
    }
    if (report.iterations >= opts.max_iter) {
      report.status = SolveStatus::max_iter;
      break;
    }

    // Newton direction, repaired if the factorization reports singularity
    // and the problem class admits the active-set repair.
    const NewtonMatrix newton = assemble_newton(problem, z, eval);
    Eigen::PartialPivLU<Matrix> lu(newton.DF);
    const bool singular = !(rcond_estimate(lu) >= opts.singular_rcond);

    Vector direction;
    bool have_direction = false;
    bool repaired = false;
    if (!singular) {
      direction = lu.solve(-eval.F);
      have_direction = true;
    } else if (repair_applicable) {
      const auto& lq = static_cast<const LinearQuadraticProblem&>(problem);
      const RepairOutcome outcome =
          repair_and_step(lq, z, extract_partition(eval));
      if (outcome.success) {
        direction = outcome.next.stack() - z.stack();
        have_direction = true;
        repaired = true;
      }
    }

    if (have_direction) {
      const double phi_trial = merit_value(problem, advance(d, z, direction, 1.0));
      if (phi_trial <= opts.q * merit.value) {
        z = advance(d, z, direction, 1.0);
        merit = merit_eval(problem, z);
        report.step_log.push_back(
            {repaired ? StepKind::lq_repaired : StepKind::newton_full, 1.0});
        ++report.iterations;
        continue;
      }
    }

    // Line-search branch: keep the Newton direction if it passes the angle
    // test, otherwise fall back to steepest descent on the merit.
    StepKind kind = StepKind::newton_damped;
    if (!have_direction) {
      direction = -merit.grad;
      kind = StepKind::gradient;
    } else if (merit.grad.dot(direction) >
               -opts.rho * direction.norm() * merit.grad_norm()) {
      direction = -merit.grad;
      kind = StepKind::newton_rejected_gradient;
    }

    double alpha = 1.0;
    bool accepted = false;
    for (;;) {
      const double slope = merit.grad.dot(direction);
      alpha = 1.0;
      for (Index i = 0; i <= opts.max_backtracks; ++i) {
        const double diff =
            merit_difference(problem, z, merit.F_fb, alpha * direction);
        bool ok = diff <= opts.sigma * alpha * slope;
        // A damped Newton step must actually decrease the merit; otherwise
        // it stalls the iteration and the gradient does better.
        if (kind == StepKind::newton_damped) ok = ok && diff < 0.0;
        if (ok) {
          accepted = true;
          break;
        }
        alpha *= opts.beta;
      }
      if (accepted || kind != StepKind::newton_damped) break;
      direction = -merit.grad;
      kind = StepKind::newton_rejected_gradient;
    }
    if (!accepted) {
      report.status = SolveStatus::line_search_failure;
      break;
    }
    z = advance(d, z, direction, alpha);
    merit = merit_eval(problem, z);
    report.step_log.push_back({kind, alpha});
    ++report.iterations;
  }

  report.final_z = z;
  report.final_residual_norm = report.residual_history.back();
  report.final_merit = merit.value;
  report.final_merit_grad_norm = merit.grad_norm();
  report.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return report;
}

}  // namespace mstat
