#pragma once

#include <vector>

#include "mstat/nms.hpp"
#include "mstat/problem.hpp"
#include "mstat/types.hpp"

namespace mstat {

/// The stacked residual
///   F(z) = (grad_x L; min(-g_i, lambda_i); h; nms(G_i, H_i, mu_i, nu_i))
/// of length n + l + m + 2p, with the derivative selections captured in the
/// same evaluation pass that produced the values. The two NMS components of
/// pair i sit at rows nms_offset + 2i and nms_offset + 2i + 1.
struct ResidualEval {
  Dims dims;
  Vector F;
  std::vector<NcpMinEval> ncp;      // one per inequality
  std::vector<NmsEval> nms;         // one per complementarity pair

  double norm_inf() const { return F.lpNorm<Eigen::Infinity>(); }

  auto grad_l_block() const { return F.segment(dims.offset_x(), dims.n); }
  auto ncp_block() const { return F.segment(dims.offset_lambda(), dims.l); }
  auto eq_block() const { return F.segment(dims.offset_eta(), dims.m); }
  auto nms_block() const { return F.segment(dims.offset_mu(), 2 * dims.p); }
};

/// Dense Newton derivative of F with the block layout
///   [ hess_xx L   g'^T   h'^T   G'^T   H'^T ]
///   [ A1          A2     0      0      0    ]
///   [ h'          0      0      0      0    ]
///   [ A3          0      0      A4     A5   ]
/// where the A-blocks are assembled from the stored derivative selections.
struct NewtonMatrix {
  Dims dims;
  Matrix DF;
};

/// Index sets read off the derivative selections of one residual
/// evaluation: il1 collects inequalities whose min picked the constraint
/// side, the ip sets split the complementarity pairs by derivative class.
/// ip_mu/ip_nu are the complements used by the active-set step.
struct ActivePartition24 {
  std::vector<Index> il1;
  std::vector<Index> ip12, ip23, ip14;
  std::vector<Index> ip_mu;  // all pairs except ip23
  std::vector<Index> ip_nu;  // all pairs except ip14
};

ResidualEval assemble_residual(const MpccProblem& problem, const PrimalDual& z);

NewtonMatrix assemble_newton(const MpccProblem& problem, const PrimalDual& z,
                             const ResidualEval& eval);

ActivePartition24 extract_partition(const ResidualEval& eval);

}  // namespace mstat
