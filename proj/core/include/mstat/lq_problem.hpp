#pragma once

#include <memory>
#include <string>

#include "mstat/problem.hpp"

namespace mstat {

/// One affine constraint block, map(x) = A x + b.
struct AffineBlock {
  Matrix A;
  Vector b;

  Index rows() const { return A.rows(); }
  Vector eval(const Vector& x) const {
    return rows() > 0 ? Vector(A * x + b) : b;
  }

  static AffineBlock empty(Index n) { return {Matrix(0, n), Vector(0)}; }
};

/// MPCC with quadratic objective 0.5 x^T Q x + c^T x + c0 and affine
/// constraint maps. The only problem class with a file format; see
/// load_lq_problem / save_lq_problem.
class LinearQuadraticProblem : public MpccProblem {
 public:
  LinearQuadraticProblem(Matrix Q, Vector c, double c0, AffineBlock g,
                         AffineBlock h, AffineBlock G, AffineBlock H);

  double eval_f(const Vector& x) const override;
  Vector grad_f(const Vector& x) const override;
  Matrix hess_f(const Vector& x) const override;

  Vector eval_g(const Vector& x) const override { return g_.eval(x); }
  Vector eval_h(const Vector& x) const override { return h_.eval(x); }
  Vector eval_G(const Vector& x) const override { return G_.eval(x); }
  Vector eval_H(const Vector& x) const override { return H_.eval(x); }

  Matrix jac_g(const Vector&) const override { return g_.A; }
  Matrix jac_h(const Vector&) const override { return h_.A; }
  Matrix jac_G(const Vector&) const override { return G_.A; }
  Matrix jac_H(const Vector&) const override { return H_.A; }

  const Matrix& quadratic_term() const { return Q_; }
  const Vector& linear_term() const { return c_; }
  double constant_term() const { return c0_; }
  const AffineBlock& block_g() const { return g_; }
  const AffineBlock& block_h() const { return h_; }
  const AffineBlock& block_G() const { return G_; }
  const AffineBlock& block_H() const { return H_; }

 private:
  Matrix Q_;
  Vector c_;
  double c0_;
  AffineBlock g_, h_, G_, H_;
};

/// Regularized first-order test problem: n = 3, two inequalities, one
/// complementarity pair, objective x1 + x2 - x3 + (c/2)|x|^2 with c > 0.
/// The origin is its global minimizer and is M- but not S-stationary.
std::shared_ptr<LinearQuadraticProblem> make_toy(double c);

/// Projection-type problem min 0.5 |x - (1, -eps)|^2 s.t. x1 >= 0, x2 >= 0,
/// x1 x2 = 0, with eps >= 0. The global minimizer (1, 0) is S-stationary;
/// for eps > 0 the merit function keeps a non-stationary local minimizer
/// near the origin.
std::shared_ptr<LinearQuadraticProblem> make_perturbed(double eps);

/// Discretized obstacle control problem in x = (y, u, xi), dimension 3N:
/// objective 0.5 |y|^2 + e^T y + 0.5 |u|^2, bound -u <= 0, state equation
/// A y - u + xi = 0 with the tridiagonal (2, -1) matrix A, and
/// complementarity between -y and xi. The origin is the unique minimizer,
/// M- but not S-stationary, with a nonunique multiplier family.
std::shared_ptr<LinearQuadraticProblem> make_obstacle(Index N);

/// Dispatch by name: "toy" (param = c), "perturbed" (param = eps),
/// "obstacle" (param = N). Throws std::invalid_argument on unknown names or
/// invalid parameters.
std::shared_ptr<LinearQuadraticProblem> make_builtin(const std::string& name,
                                                     double param);

struct LoadedLqProblem {
  std::shared_ptr<LinearQuadraticProblem> problem;
  /// Set when the stored Q was not symmetric and (Q + Q^T)/2 was used.
  bool symmetrized_q = false;
};

/// Reads a linear-quadratic problem from the JSON document written by
/// save_lq_problem. Fields: n, l, m, p, Q (n*n, row-major), c (n), c0, and
/// blocks g, h, G, H each holding A (rows*n, row-major) and b (rows).
/// Throws std::runtime_error with field context on parse or dimension
/// errors.
LoadedLqProblem load_lq_problem(const std::string& path);

void save_lq_problem(const LinearQuadraticProblem& problem,
                     const std::string& path);

}  // namespace mstat
