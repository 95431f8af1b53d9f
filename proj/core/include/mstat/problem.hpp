#pragma once

#include <vector>

#include "mstat/types.hpp"

namespace mstat {

/// Evaluation contract for an MPCC
///
///   min f(x)  s.t.  g(x) <= 0,  h(x) = 0,
///                   G(x) >= 0,  H(x) >= 0,  G(x)^T H(x) = 0.
///
/// All data functions are twice continuously differentiable. Evaluation must
/// be reentrant and side-effect-free; the library evaluates problems from
/// multiple threads concurrently.
class MpccProblem {
 public:
  virtual ~MpccProblem() = default;

  const Dims& dims() const { return dims_; }

  /// True if g, h, G, H are affine; constraint Hessians are then identically
  /// zero and are never requested.
  bool affine_constraints() const { return affine_constraints_; }

  /// True if the objective Hessian is constant.
  bool quadratic_objective() const { return quadratic_objective_; }

  virtual double eval_f(const Vector& x) const = 0;
  virtual Vector grad_f(const Vector& x) const = 0;
  virtual Matrix hess_f(const Vector& x) const = 0;

  virtual Vector eval_g(const Vector& x) const = 0;
  virtual Vector eval_h(const Vector& x) const = 0;
  virtual Vector eval_G(const Vector& x) const = 0;
  virtual Vector eval_H(const Vector& x) const = 0;

  virtual Matrix jac_g(const Vector& x) const = 0;
  virtual Matrix jac_h(const Vector& x) const = 0;
  virtual Matrix jac_G(const Vector& x) const = 0;
  virtual Matrix jac_H(const Vector& x) const = 0;

  /// Hessians of single constraint components. Problems with nonlinear
  /// constraints must override; the defaults are the all-zero matrices used
  /// for affine constraints.
  virtual Matrix hess_g(const Vector& x, Index i) const;
  virtual Matrix hess_h(const Vector& x, Index i) const;
  virtual Matrix hess_G(const Vector& x, Index i) const;
  virtual Matrix hess_H(const Vector& x, Index i) const;

 protected:
  MpccProblem(Dims dims, bool affine, bool quadratic)
      : dims_(dims),
        affine_constraints_(affine),
        quadratic_objective_(quadratic) {}

 private:
  Dims dims_;
  bool affine_constraints_;
  bool quadratic_objective_;
};

/// Value, gradient and Hessian (in x) of the MPCC Lagrangian
/// f + lambda^T g + eta^T h + mu^T G + nu^T H.
struct LagrangianEval {
  double value = 0.0;
  Vector grad_x;
  Matrix hess_xx;
};

LagrangianEval lagrangian(const MpccProblem& problem, const PrimalDual& z);

/// Index sets of a (near-)feasible point. Entries with |value| <= tol_act
/// count as zero; multiplier signs are taken literally.
struct IndexPartition {
  std::vector<Index> ig;        // active inequalities
  std::vector<Index> ig_plus;   // active inequalities with lambda_i > 0
  std::vector<Index> i_plus0;   // G > 0, H = 0
  std::vector<Index> i_0plus;   // G = 0, H > 0
  std::vector<Index> i_00;      // biactive pairs
  std::vector<Index> i00_mu;    // biactive with mu_i != 0
  std::vector<Index> i00_nu;    // biactive with nu_i != 0
  std::vector<Index> i00_00;    // biactive with mu_i = nu_i = 0
};

/// Default activity tolerance, applied as tol * (1 + |x|_inf).
inline constexpr double kDefaultActiveTol = 1e-8;

/// Default relative singular-value cutoff for rank decisions.
inline constexpr double kDefaultRankTol = 1e-10;

IndexPartition active_partition(const MpccProblem& problem, const PrimalDual& z,
                                double tol_act = kDefaultActiveTol);

enum class Stationarity {
  infeasible,
  not_weakly_stationary,
  weakly_stationary,
  m_stationary,
  s_stationary,
};

const char* to_string(Stationarity s);

/// Checks the first-order systems at z up to tolerance tol and returns the
/// strongest label that holds. Infeasible points are reported as such.
Stationarity classify_stationarity(const MpccProblem& problem,
                                   const PrimalDual& z, double tol = 1e-6);

/// Full row rank of the stacked gradients of all active constraints
/// (inequalities on ig, all equalities, G on i_0plus + i_00, H on
/// i_plus0 + i_00), decided by a singular-value cutoff.
bool check_mpcc_licq(const MpccProblem& problem, const Vector& x,
                     double tol_rank = kDefaultRankTol);

/// Weaker, multiplier-dependent rank condition for linear-quadratic
/// problems: rows restricted to ig_plus, all equalities, G on
/// i_0plus + i00_mu, H on i_plus0 + i00_nu.
bool check_relaxed_lq_cq(const MpccProblem& problem, const PrimalDual& z,
                         double tol_rank = kDefaultRankTol);

/// Hard cap on |i00_00| for the branch enumeration below.
inline constexpr Index kSsocEnumerationGuard = 20;

/// Strong second-order condition at an M-stationary tuple: for every subset
/// beta of the doubly-degenerate biactive indices, the Lagrangian Hessian
/// must be positive definite (smallest eigenvalue > tol) on the kernel of
/// the branch constraint rows. Throws if the enumeration guard is exceeded.
bool check_mpcc_ssoc(const MpccProblem& problem, const PrimalDual& z,
                     double tol = 1e-9);

}  // namespace mstat
