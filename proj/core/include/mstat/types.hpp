#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>

namespace mstat {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Problem dimensions: n primal variables, l inequality constraints,
/// m equality constraints, p complementarity pairs.
struct Dims {
  Index n = 0;
  Index l = 0;
  Index m = 0;
  Index p = 0;

  /// Length of the stacked primal-dual vector (x, lambda, eta, mu, nu).
  Index total() const { return n + l + m + 2 * p; }

  Index offset_x() const { return 0; }
  Index offset_lambda() const { return n; }
  Index offset_eta() const { return n + l; }
  Index offset_mu() const { return n + l + m; }
  Index offset_nu() const { return n + l + m + p; }

  bool operator==(const Dims&) const = default;
};

/// Stacked iterate z = (x, lambda, eta, mu, nu).
struct PrimalDual {
  Vector x;
  Vector lambda;
  Vector eta;
  Vector mu;
  Vector nu;

  static PrimalDual zero(const Dims& d) {
    return {Vector::Zero(d.n), Vector::Zero(d.l), Vector::Zero(d.m),
            Vector::Zero(d.p), Vector::Zero(d.p)};
  }

  Dims dims() const {
    if (mu.size() != nu.size()) {
      throw std::invalid_argument("PrimalDual: mu and nu sizes differ");
    }
    return {x.size(), lambda.size(), eta.size(), mu.size()};
  }

  Vector stack() const {
    Vector z(x.size() + lambda.size() + eta.size() + mu.size() + nu.size());
    z << x, lambda, eta, mu, nu;
    return z;
  }

  static PrimalDual unstack(const Dims& d, const Vector& z) {
    if (z.size() != d.total()) {
      throw std::invalid_argument("PrimalDual::unstack: size mismatch");
    }
    return {z.segment(d.offset_x(), d.n), z.segment(d.offset_lambda(), d.l),
            z.segment(d.offset_eta(), d.m), z.segment(d.offset_mu(), d.p),
            z.segment(d.offset_nu(), d.p)};
  }
};

}  // namespace mstat
