#pragma once

#include <cmath>
#include <functional>

#include "mstat/types.hpp"

namespace mstat_test {

// Central finite differences with a per-coordinate step h * (1 + |x_i|).
inline mstat::Vector fd_gradient(
    const std::function<double(const mstat::Vector&)>& f,
    const mstat::Vector& x, double h = 1e-5) {
  mstat::Vector grad(x.size());
  for (mstat::Index i = 0; i < x.size(); ++i) {
    const double step = h * (1.0 + std::abs(x(i)));
    mstat::Vector xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    grad(i) = (f(xp) - f(xm)) / (2.0 * step);
  }
  return grad;
}

inline mstat::Matrix fd_jacobian(
    const std::function<mstat::Vector(const mstat::Vector&)>& f,
    const mstat::Vector& x, double h = 1e-5) {
  const mstat::Vector f0 = f(x);
  mstat::Matrix jac(f0.size(), x.size());
  for (mstat::Index i = 0; i < x.size(); ++i) {
    const double step = h * (1.0 + std::abs(x(i)));
    mstat::Vector xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    jac.col(i) = (f(xp) - f(xm)) / (2.0 * step);
  }
  return jac;
}

inline double rel_error(const mstat::Vector& got, const mstat::Vector& want) {
  const double scale = std::max(1.0, want.norm());
  return (got - want).norm() / scale;
}

inline double rel_error(const mstat::Matrix& got, const mstat::Matrix& want) {
  const double scale = std::max(1.0, want.norm());
  return (got - want).norm() / scale;
}

}  // namespace mstat_test
