#include "mstat/problem.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mstat {

namespace {

bool contains(const std::vector<Index>& set, Index i) {
  return std::find(set.begin(), set.end(), i) != set.end();
}

// Stack the selected rows of up to four Jacobians into one matrix.
Matrix stack_rows(const Matrix& jg, const std::vector<Index>& rows_g,
                  const Matrix& jh, const Matrix& jG,
                  const std::vector<Index>& rows_G, const Matrix& jH,
                  const std::vector<Index>& rows_H) {
  const Index n = jh.cols();
  const Index total = static_cast<Index>(rows_g.size()) + jh.rows() +
                      static_cast<Index>(rows_G.size()) +
                      static_cast<Index>(rows_H.size());
  Matrix out(total, n);
  Index r = 0;
  for (Index i : rows_g) out.row(r++) = jg.row(i);
  for (Index i = 0; i < jh.rows(); ++i) out.row(r++) = jh.row(i);
  for (Index i : rows_G) out.row(r++) = jG.row(i);
  for (Index i : rows_H) out.row(r++) = jH.row(i);
  return out;
}

bool has_full_row_rank(const Matrix& a, double tol_rank) {
  if (a.rows() == 0) return true;
  if (a.rows() > a.cols()) return false;
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double cutoff = tol_rank * sv(0);
  Index rank = 0;
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff) ++rank;
  }
  return rank == a.rows();
}

// Orthonormal kernel basis, by singular-value cutoff.
Matrix kernel_basis(const Matrix& a, double tol_rank) {
  const Index n = a.cols();
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol_rank * std::max(sv(0), 0.0);
  Index rank = 0;
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

void require_dims(const MpccProblem& problem, const PrimalDual& z) {
  if (z.dims() != problem.dims()) {
    throw std::invalid_argument("PrimalDual dimensions do not match problem");
  }
}

}  // namespace

Matrix MpccProblem::hess_g(const Vector&, Index) const {
  return Matrix::Zero(dims_.n, dims_.n);
}
Matrix MpccProblem::hess_h(const Vector&, Index) const {
  return Matrix::Zero(dims_.n, dims_.n);
}
Matrix MpccProblem::hess_G(const Vector&, Index) const {
  return Matrix::Zero(dims_.n, dims_.n);
}
Matrix MpccProblem::hess_H(const Vector&, Index) const {
  return Matrix::Zero(dims_.n, dims_.n);
}

LagrangianEval lagrangian(const MpccProblem& problem, const PrimalDual& z) {
  require_dims(problem, z);
  const Dims& d = problem.dims();

  LagrangianEval out;
  out.value = problem.eval_f(z.x);
  out.grad_x = problem.grad_f(z.x);
  out.hess_xx = problem.hess_f(z.x);

  if (d.l > 0) {
    out.value += z.lambda.dot(problem.eval_g(z.x));
    out.grad_x += problem.jac_g(z.x).transpose() * z.lambda;
  }
  if (d.m > 0) {
    out.value += z.eta.dot(problem.eval_h(z.x));
    out.grad_x += problem.jac_h(z.x).transpose() * z.eta;
  }
  if (d.p > 0) {
    out.value += z.mu.dot(problem.eval_G(z.x)) + z.nu.dot(problem.eval_H(z.x));
    out.grad_x += problem.jac_G(z.x).transpose() * z.mu;
    out.grad_x += problem.jac_H(z.x).transpose() * z.nu;
  }

  if (!problem.affine_constraints()) {
    for (Index i = 0; i < d.l; ++i) {
      out.hess_xx += z.lambda(i) * problem.hess_g(z.x, i);
    }
    for (Index i = 0; i < d.m; ++i) {
      out.hess_xx += z.eta(i) * problem.hess_h(z.x, i);
    }
    for (Index i = 0; i < d.p; ++i) {
      out.hess_xx += z.mu(i) * problem.hess_G(z.x, i);
      out.hess_xx += z.nu(i) * problem.hess_H(z.x, i);
    }
  }
  return out;
}

IndexPartition active_partition(const MpccProblem& problem,
                                const PrimalDual& z, double tol_act) {
  require_dims(problem, z);
  const Dims& d = problem.dims();
  const double scale = 1.0 + (d.n > 0 ? z.x.lpNorm<Eigen::Infinity>() : 0.0);
  const double tol = tol_act * scale;

  IndexPartition part;
  if (d.l > 0) {
    const Vector g = problem.eval_g(z.x);
    for (Index i = 0; i < d.l; ++i) {
      if (std::abs(g(i)) <= tol) {
        part.ig.push_back(i);
        if (z.lambda(i) > 0.0) part.ig_plus.push_back(i);
      }
    }
  }
  if (d.p > 0) {
    const Vector G = problem.eval_G(z.x);
    const Vector H = problem.eval_H(z.x);
    for (Index i = 0; i < d.p; ++i) {
      const bool G0 = std::abs(G(i)) <= tol;
      const bool H0 = std::abs(H(i)) <= tol;
      if (G0 && H0) {
        part.i_00.push_back(i);
        const bool mu0 = z.mu(i) == 0.0;
        const bool nu0 = z.nu(i) == 0.0;
        if (!mu0) part.i00_mu.push_back(i);
        if (!nu0) part.i00_nu.push_back(i);
        if (mu0 && nu0) part.i00_00.push_back(i);
      } else if (G0) {
        part.i_0plus.push_back(i);
      } else if (H0) {
        part.i_plus0.push_back(i);
      }
      // Pairs with G > 0 and H > 0 violate complementarity; they belong to
      // no set and make the point infeasible, which callers detect
      // separately.
    }
  }
  return part;
}

const char* to_string(Stationarity s) {
  switch (s) {
    case Stationarity::infeasible: return "infeasible";
    case Stationarity::not_weakly_stationary: return "not_weakly_stationary";
    case Stationarity::weakly_stationary: return "weakly_stationary";
    case Stationarity::m_stationary: return "M-stationary";
    case Stationarity::s_stationary: return "S-stationary";
  }
  return "unknown";
}

Stationarity classify_stationarity(const MpccProblem& problem,
                                   const PrimalDual& z, double tol) {
  require_dims(problem, z);
  const Dims& d = problem.dims();

  // Feasibility.
  if (d.l > 0 && (problem.eval_g(z.x).array() > tol).any()) {
    return Stationarity::infeasible;
  }
  if (d.m > 0 && (problem.eval_h(z.x).array().abs() > tol).any()) {
    return Stationarity::infeasible;
  }
  if (d.p > 0) {
    const Vector G = problem.eval_G(z.x);
    const Vector H = problem.eval_H(z.x);
    if ((G.array() < -tol).any() || (H.array() < -tol).any()) {
      return Stationarity::infeasible;
    }
    for (Index i = 0; i < d.p; ++i) {
      if (std::abs(G(i) * H(i)) > tol) return Stationarity::infeasible;
    }
  }

  const IndexPartition part = active_partition(problem, z, tol);

  // Gradient of the Lagrangian must vanish.
  const LagrangianEval lag = lagrangian(problem, z);
  bool weakly = lag.grad_x.lpNorm<Eigen::Infinity>() <= tol;

  // Multiplier sign and support conditions.
  for (Index i = 0; i < d.l && weakly; ++i) {
    if (contains(part.ig, i)) {
      if (z.lambda(i) < -tol) weakly = false;
    } else if (std::abs(z.lambda(i)) > tol) {
      weakly = false;
    }
  }
  for (Index i : part.i_plus0) {
    if (std::abs(z.mu(i)) > tol) weakly = false;
  }
  for (Index i : part.i_0plus) {
    if (std::abs(z.nu(i)) > tol) weakly = false;
  }
  if (!weakly) return Stationarity::not_weakly_stationary;

  bool m_ok = true;
  bool s_ok = true;
  for (Index i : part.i_00) {
    const double mu = z.mu(i);
    const double nu = z.nu(i);
    if (!(std::abs(mu * nu) <= tol || (mu < 0.0 && nu < 0.0))) m_ok = false;
    if (!(mu <= tol && nu <= tol)) s_ok = false;
  }
  if (s_ok) return Stationarity::s_stationary;
  if (m_ok) return Stationarity::m_stationary;
  return Stationarity::weakly_stationary;
}

bool check_mpcc_licq(const MpccProblem& problem, const Vector& x,
                     double tol_rank) {
  const Dims& d = problem.dims();
  PrimalDual z = PrimalDual::zero(d);
  z.x = x;
  const IndexPartition part = active_partition(problem, z);

  std::vector<Index> rows_G = part.i_0plus;
  rows_G.insert(rows_G.end(), part.i_00.begin(), part.i_00.end());
  std::vector<Index> rows_H = part.i_plus0;
  rows_H.insert(rows_H.end(), part.i_00.begin(), part.i_00.end());

  const Matrix stacked = stack_rows(
      d.l > 0 ? problem.jac_g(x) : Matrix(0, d.n), part.ig,
      d.m > 0 ? problem.jac_h(x) : Matrix(0, d.n),
      d.p > 0 ? problem.jac_G(x) : Matrix(0, d.n), rows_G,
      d.p > 0 ? problem.jac_H(x) : Matrix(0, d.n), rows_H);
  return has_full_row_rank(stacked, tol_rank);
}

bool check_relaxed_lq_cq(const MpccProblem& problem, const PrimalDual& z,
                         double tol_rank) {
  require_dims(problem, z);
  const Dims& d = problem.dims();
  const IndexPartition part = active_partition(problem, z);

  std::vector<Index> rows_G = part.i_0plus;
  rows_G.insert(rows_G.end(), part.i00_mu.begin(), part.i00_mu.end());
  std::vector<Index> rows_H = part.i_plus0;
  rows_H.insert(rows_H.end(), part.i00_nu.begin(), part.i00_nu.end());

  const Matrix stacked = stack_rows(
      d.l > 0 ? problem.jac_g(z.x) : Matrix(0, d.n), part.ig_plus,
      d.m > 0 ? problem.jac_h(z.x) : Matrix(0, d.n),
      d.p > 0 ? problem.jac_G(z.x) : Matrix(0, d.n), rows_G,
      d.p > 0 ? problem.jac_H(z.x) : Matrix(0, d.n), rows_H);
  return has_full_row_rank(stacked, tol_rank);
}

bool check_mpcc_ssoc(const MpccProblem& problem, const PrimalDual& z,
                     double tol) {
  require_dims(problem, z);
  const Dims& d = problem.dims();
  const IndexPartition part = active_partition(problem, z);

  const Index free = static_cast<Index>(part.i00_00.size());
  if (free > kSsocEnumerationGuard) {
    throw std::runtime_error(
        "check_mpcc_ssoc: too many doubly-degenerate biactive indices to "
        "enumerate");
  }

  const Matrix hess = lagrangian(problem, z).hess_xx;
  const Matrix jg = d.l > 0 ? problem.jac_g(z.x) : Matrix(0, d.n);
  const Matrix jh = d.m > 0 ? problem.jac_h(z.x) : Matrix(0, d.n);
  const Matrix jG = d.p > 0 ? problem.jac_G(z.x) : Matrix(0, d.n);
  const Matrix jH = d.p > 0 ? problem.jac_H(z.x) : Matrix(0, d.n);

  std::vector<Index> base_G = part.i_0plus;
  base_G.insert(base_G.end(), part.i00_mu.begin(), part.i00_mu.end());
  std::vector<Index> base_H = part.i_plus0;
  base_H.insert(base_H.end(), part.i00_nu.begin(), part.i00_nu.end());

  const std::uint64_t count = std::uint64_t{1} << free;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::vector<Index> rows_G = base_G;
    std::vector<Index> rows_H = base_H;
    for (Index k = 0; k < free; ++k) {
      if (mask & (std::uint64_t{1} << k)) {
        rows_G.push_back(part.i00_00[static_cast<std::size_t>(k)]);
      } else {
        rows_H.push_back(part.i00_00[static_cast<std::size_t>(k)]);
      }
    }
    const Matrix rows =
        stack_rows(jg, part.ig_plus, jh, jG, rows_G, jH, rows_H);
    const Matrix kernel = kernel_basis(rows, kDefaultRankTol);
    if (kernel.cols() == 0) continue;
    const Matrix reduced = kernel.transpose() * hess * kernel;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(reduced);
    if (eig.eigenvalues().minCoeff() <= tol) return false;
  }
  return true;
}

}  // namespace mstat
