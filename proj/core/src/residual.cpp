#include "mstat/residual.hpp"

#include <stdexcept>

namespace mstat {

ResidualEval assemble_residual(const MpccProblem& problem,
                               const PrimalDual& z) {
  if (z.dims() != problem.dims()) {
    throw std::invalid_argument("assemble_residual: dimension mismatch");
  }
  const Dims& d = problem.dims();

  ResidualEval eval;
  eval.dims = d;
  eval.F.resize(d.total());
  eval.ncp.reserve(static_cast<std::size_t>(d.l));
  eval.nms.reserve(static_cast<std::size_t>(d.p));

  eval.F.segment(d.offset_x(), d.n) = lagrangian(problem, z).grad_x;

  if (d.l > 0) {
    const Vector g = problem.eval_g(z.x);
    for (Index i = 0; i < d.l; ++i) {
      const NcpMinEval e = ncp_min(-g(i), z.lambda(i));
      eval.F(d.offset_lambda() + i) = e.value;
      eval.ncp.push_back(e);
    }
  }

  if (d.m > 0) {
    eval.F.segment(d.offset_eta(), d.m) = problem.eval_h(z.x);
  }

  if (d.p > 0) {
    const Vector G = problem.eval_G(z.x);
    const Vector H = problem.eval_H(z.x);
    for (Index i = 0; i < d.p; ++i) {
      const NmsEval e = nms_eval({G(i), H(i), z.mu(i), z.nu(i)});
      eval.F(d.offset_mu() + 2 * i) = e.value1;
      eval.F(d.offset_mu() + 2 * i + 1) = e.value2;
      eval.nms.push_back(e);
    }
  }
  return eval;
}

namespace {

// Writes one NMS derivative row: the selected coordinate decides whether the
// row acts on x (through the G or H Jacobian) or on a single multiplier.
void write_nms_row(Matrix& DF, Index row, const SignedUnit& unit,
                   const Dims& d, Index pair, const Matrix& jG,
                   const Matrix& jH) {
  const double s = static_cast<double>(unit.sign);
  switch (unit.index) {
    case 1:
      DF.block(row, 0, 1, d.n) = s * jG.row(pair);
      break;
    case 2:
      DF.block(row, 0, 1, d.n) = s * jH.row(pair);
      break;
    case 3:
      DF(row, d.offset_mu() + pair) = s;
      break;
    default:
      DF(row, d.offset_nu() + pair) = s;
      break;
  }
}

}  // namespace

NewtonMatrix assemble_newton(const MpccProblem& problem, const PrimalDual& z,
                             const ResidualEval& eval) {
  const Dims& d = problem.dims();
  if (eval.dims != d) {
    throw std::invalid_argument("assemble_newton: dimension mismatch");
  }

  NewtonMatrix out;
  out.dims = d;
  out.DF = Matrix::Zero(d.total(), d.total());
  Matrix& DF = out.DF;

  const Matrix jg = d.l > 0 ? problem.jac_g(z.x) : Matrix(0, d.n);
  const Matrix jh = d.m > 0 ? problem.jac_h(z.x) : Matrix(0, d.n);
  const Matrix jG = d.p > 0 ? problem.jac_G(z.x) : Matrix(0, d.n);
  const Matrix jH = d.p > 0 ? problem.jac_H(z.x) : Matrix(0, d.n);

  // Stationarity rows.
  DF.block(0, 0, d.n, d.n) = lagrangian(problem, z).hess_xx;
  if (d.l > 0) DF.block(0, d.offset_lambda(), d.n, d.l) = jg.transpose();
  if (d.m > 0) DF.block(0, d.offset_eta(), d.n, d.m) = jh.transpose();
  if (d.p > 0) {
    DF.block(0, d.offset_mu(), d.n, d.p) = jG.transpose();
    DF.block(0, d.offset_nu(), d.n, d.p) = jH.transpose();
  }

  // NCP rows: d/dx min(-g_i, lambda_i) = -da * grad g_i, d/dlambda_i = db.
  for (Index i = 0; i < d.l; ++i) {
    const NcpMinEval& e = eval.ncp[static_cast<std::size_t>(i)];
    const Index row = d.offset_lambda() + i;
    if (e.da != 0.0) DF.block(row, 0, 1, d.n) = -e.da * jg.row(i);
    DF(row, d.offset_lambda() + i) = e.db;
  }

  // Equality rows.
  if (d.m > 0) DF.block(d.offset_eta(), 0, d.m, d.n) = jh;

  // NMS rows, two per complementarity pair.
  for (Index i = 0; i < d.p; ++i) {
    const DerivPattern& pat = eval.nms[static_cast<std::size_t>(i)].deriv;
    write_nms_row(DF, d.offset_mu() + 2 * i, pat.row1, d, i, jG, jH);
    write_nms_row(DF, d.offset_mu() + 2 * i + 1, pat.row2, d, i, jG, jH);
  }
  return out;
}

ActivePartition24 extract_partition(const ResidualEval& eval) {
  ActivePartition24 part;
  for (Index i = 0; i < eval.dims.l; ++i) {
    if (eval.ncp[static_cast<std::size_t>(i)].da == 1.0) part.il1.push_back(i);
  }
  for (Index i = 0; i < eval.dims.p; ++i) {
    switch (eval.nms[static_cast<std::size_t>(i)].deriv.jclass) {
      case JClass::J12:
        part.ip12.push_back(i);
        part.ip_mu.push_back(i);
        part.ip_nu.push_back(i);
        break;
      case JClass::J23:
        part.ip23.push_back(i);
        part.ip_nu.push_back(i);
        break;
      case JClass::J14:
        part.ip14.push_back(i);
        part.ip_mu.push_back(i);
        break;
    }
  }
  return part;
}

}  // namespace mstat
