#pragma once

#include <vector>

#include "mstat/lq_problem.hpp"
#include "mstat/residual.hpp"
#include "mstat/types.hpp"

namespace mstat {

/// Index sets defining one active-set system: inequalities kept active,
/// complementarity pairs with the G-row kept active, and pairs with the
/// H-row kept active. Multipliers outside the sets are forced to zero.
struct LqIndexSets {
  std::vector<Index> il1;
  std::vector<Index> ip_mu;
  std::vector<Index> ip_nu;

  static LqIndexSets from_partition(const ActivePartition24& part) {
    return {part.il1, part.ip_mu, part.ip_nu};
  }

  Index candidate_count() const {
    return static_cast<Index>(il1.size() + ip_mu.size() + ip_nu.size());
  }
};

/// The square linear system for the next iterate
/// (x+, lambda+ on il1, eta+, mu+ on ip_mu, nu+ on ip_nu): stationarity of
/// the Lagrangian plus the selected active constraint rows.
struct LqSystem {
  LqIndexSets sets;
  Matrix K;
  Vector rhs;
};

LqSystem build_lq_system(const LinearQuadraticProblem& problem,
                         const LqIndexSets& sets);

/// Expands a solution of build_lq_system back to a full primal-dual tuple,
/// with multipliers outside the index sets set to zero.
PrimalDual expand_lq_solution(const LinearQuadraticProblem& problem,
                              const LqIndexSets& sets, const Vector& solution);

/// Singular-value rank test of the square system matrix; threshold is
/// relative to the largest singular value.
bool lq_system_unique(const LqSystem& system,
                      double tol_rank = kDefaultRankTol);

enum class CandidateSet { il1, ip_mu, ip_nu };

struct RemovalCandidate {
  CandidateSet set = CandidateSet::il1;
  Index index = 0;
  double key = 0.0;
};

/// Suspect indices sorted by ascending key: lambda_i on il1,
/// max(|mu_j|, |H_j(x)|) on ip_mu, max(|nu_j|, |G_j(x)|) on ip_nu.
/// Ties break by set (il1, ip_mu, ip_nu) and then by index.
std::vector<RemovalCandidate> sort_removal_candidates(
    const MpccProblem& problem, const PrimalDual& z,
    const ActivePartition24& partition);

struct RepairOutcome {
  bool success = false;
  PrimalDual next;
  /// Candidates removed before the system became uniquely solvable, in
  /// removal order.
  std::vector<RemovalCandidate> removed;
  /// Index sets of the system that was finally solved (or the last one
  /// tested when unsuccessful).
  LqIndexSets final_sets;
};

/// Removes sorted candidates one at a time until the active-set system is
/// uniquely solvable, then solves it for the next iterate. Returns an
/// unsuccessful outcome when the candidates are exhausted and the system is
/// still rank-deficient; the caller falls back to a gradient step.
RepairOutcome repair_and_step(const LinearQuadraticProblem& problem,
                              const PrimalDual& z,
                              const ActivePartition24& partition,
                              double tol_rank = kDefaultRankTol);

}  // namespace mstat
