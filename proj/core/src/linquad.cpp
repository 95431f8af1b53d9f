#include "mstat/linquad.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace mstat {

namespace {

Matrix select_rows(const Matrix& A, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), A.cols());
  Index r = 0;
  for (Index i : rows) out.row(r++) = A.row(i);
  return out;
}

Vector select_entries(const Vector& v, const std::vector<Index>& rows) {
  Vector out(static_cast<Index>(rows.size()));
  Index r = 0;
  for (Index i : rows) out(r++) = v(i);
  return out;
}

int set_order(CandidateSet s) {
  switch (s) {
    case CandidateSet::il1: return 0;
    case CandidateSet::ip_mu: return 1;
    default: return 2;
  }
}

}  // namespace

LqSystem build_lq_system(const LinearQuadraticProblem& problem,
                         const LqIndexSets& sets) {
  const Dims& d = problem.dims();
  const Index nl = static_cast<Index>(sets.il1.size());
  const Index nmu = static_cast<Index>(sets.ip_mu.size());
  const Index nnu = static_cast<Index>(sets.ip_nu.size());
  const Index size = d.n + nl + d.m + nmu + nnu;

  const Matrix Ag = select_rows(problem.block_g().A, sets.il1);
  const Matrix AG = select_rows(problem.block_G().A, sets.ip_mu);
  const Matrix AH = select_rows(problem.block_H().A, sets.ip_nu);
  const Matrix& Ah = problem.block_h().A;

  LqSystem sys;
  sys.sets = sets;
  sys.K = Matrix::Zero(size, size);
  sys.rhs = Vector::Zero(size);

  sys.K.topLeftCorner(d.n, d.n) = problem.quadratic_term();
  Index col = d.n;
  if (nl > 0) sys.K.block(0, col, d.n, nl) = Ag.transpose();
  col += nl;
  if (d.m > 0) sys.K.block(0, col, d.n, d.m) = Ah.transpose();
  col += d.m;
  if (nmu > 0) sys.K.block(0, col, d.n, nmu) = AG.transpose();
  col += nmu;
  if (nnu > 0) sys.K.block(0, col, d.n, nnu) = AH.transpose();

  Index row = d.n;
  if (nl > 0) sys.K.block(row, 0, nl, d.n) = Ag;
  row += nl;
  if (d.m > 0) sys.K.block(row, 0, d.m, d.n) = Ah;
  row += d.m;
  if (nmu > 0) sys.K.block(row, 0, nmu, d.n) = AG;
  row += nmu;
  if (nnu > 0) sys.K.block(row, 0, nnu, d.n) = AH;

  sys.rhs.head(d.n) = -problem.linear_term();
  row = d.n;
  sys.rhs.segment(row, nl) = -select_entries(problem.block_g().b, sets.il1);
  row += nl;
  sys.rhs.segment(row, d.m) = -problem.block_h().b;
  row += d.m;
  sys.rhs.segment(row, nmu) = -select_entries(problem.block_G().b, sets.ip_mu);
  row += nmu;
  sys.rhs.segment(row, nnu) = -select_entries(problem.block_H().b, sets.ip_nu);
  return sys;
}

PrimalDual expand_lq_solution(const LinearQuadraticProblem& problem,
                              const LqIndexSets& sets,
                              const Vector& solution) {
  const Dims& d = problem.dims();
  PrimalDual z = PrimalDual::zero(d);
  z.x = solution.head(d.n);
  Index pos = d.n;
  for (Index i : sets.il1) z.lambda(i) = solution(pos++);
  z.eta = solution.segment(pos, d.m);
  pos += d.m;
  for (Index i : sets.ip_mu) z.mu(i) = solution(pos++);
  for (Index i : sets.ip_nu) z.nu(i) = solution(pos++);
  return z;
}

bool lq_system_unique(const LqSystem& system, double tol_rank) {
  if (system.K.rows() == 0) return true;
  Eigen::BDCSVD<Matrix> svd(system.K);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return false;
  const double cutoff = tol_rank * sv(0);
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= cutoff) return false;
  }
  return true;
}

std::vector<RemovalCandidate> sort_removal_candidates(
    const MpccProblem& problem, const PrimalDual& z,
    const ActivePartition24& partition) {
  std::vector<RemovalCandidate> out;
  out.reserve(partition.il1.size() + partition.ip_mu.size() +
              partition.ip_nu.size());

  for (Index i : partition.il1) {
    out.push_back({CandidateSet::il1, i, z.lambda(i)});
  }
  if (!partition.ip_mu.empty() || !partition.ip_nu.empty()) {
    const Vector G = problem.eval_G(z.x);
    const Vector H = problem.eval_H(z.x);
    for (Index j : partition.ip_mu) {
      out.push_back({CandidateSet::ip_mu, j,
                     std::max(std::abs(z.mu(j)), std::abs(H(j)))});
    }
    for (Index j : partition.ip_nu) {
      out.push_back({CandidateSet::ip_nu, j,
                     std::max(std::abs(z.nu(j)), std::abs(G(j)))});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const RemovalCandidate& a, const RemovalCandidate& b) {
              return std::make_tuple(a.key, set_order(a.set), a.index) <
                     std::make_tuple(b.key, set_order(b.set), b.index);
            });
  return out;
}

RepairOutcome repair_and_step(const LinearQuadraticProblem& problem,
                              const PrimalDual& z,
                              const ActivePartition24& partition,
                              double tol_rank) {
  LqIndexSets sets = LqIndexSets::from_partition(partition);
  std::vector<RemovalCandidate> queue =
      sort_removal_candidates(problem, z, partition);

  RepairOutcome out;
  std::size_t next = 0;
  for (;;) {
    const LqSystem sys = build_lq_system(problem, sets);
    if (lq_system_unique(sys, tol_rank)) {
      const Vector sol = sys.K.partialPivLu().solve(sys.rhs);
      out.success = true;
      out.next = expand_lq_solution(problem, sets, sol);
      out.final_sets = sets;
      return out;
    }
    if (next >= queue.size()) {
      out.final_sets = sets;
      return out;  // candidates exhausted, still rank-deficient
    }
    const RemovalCandidate cand = queue[next++];
    auto& target = cand.set == CandidateSet::il1   ? sets.il1
                   : cand.set == CandidateSet::ip_mu ? sets.ip_mu
                                                     : sets.ip_nu;
    target.erase(std::find(target.begin(), target.end(), cand.index));
    out.removed.push_back(cand);
  }
}

}  // namespace mstat
