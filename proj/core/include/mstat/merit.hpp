#pragma once

#include "mstat/problem.hpp"
#include "mstat/types.hpp"

namespace mstat {

/// Smooth merit data at an iterate: the Fischer-Burmeister-modified residual
/// F_fb of length n + l + m + 4p, the merit value 0.5 |F_fb|^2, and its
/// gradient with respect to the n + l + m + 2p primal-dual variables.
/// The merit is continuously differentiable: F_fb components vanish exactly
/// at their kinks, so the gradient drops every contribution whose residual
/// component is zero.
struct MeritEval {
  Vector F_fb;
  double value = 0.0;
  Vector grad;

  double grad_norm() const { return grad.norm(); }
};

/// The modified residual
///   (grad_x L; pi_fb(-g_i, lambda_i); h; comp_measures_fb(G_i, H_i, mu_i, nu_i)).
/// Vanishes exactly at the primal-dual M-stationary tuples.
Vector assemble_residual_fb(const MpccProblem& problem, const PrimalDual& z);

/// Merit value and analytic gradient. The gradient matches central finite
/// differences wherever the residual components are nonzero and vanishes at
/// every M-stationary tuple.
MeritEval merit_eval(const MpccProblem& problem, const PrimalDual& z);

/// Merit difference Phi(z + step) - Phi(z), given the residual f_base at z.
/// Comparing independently rounded merit values caps the resolvable descent
/// at one ulp of the merit; this evaluates the residual increments instead.
/// For linear-quadratic problems the increments are formed without
/// cancellation, so line searches remain meaningful arbitrarily close to
/// merit-stationary points; other problems fall back to direct subtraction.
double merit_difference(const MpccProblem& problem, const PrimalDual& z,
                        const Vector& f_base, const Vector& step);

}  // namespace mstat
