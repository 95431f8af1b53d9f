#include "mstat/merit.hpp"

#include <cmath>
#include <stdexcept>

#include "mstat/lq_problem.hpp"
#include "mstat/nms.hpp"

namespace mstat {

namespace {

inline double sign_of(double x) { return x >= 0.0 ? 1.0 : -1.0; }

struct FbPartials {
  double da;
  double db;
};

// Classical gradient of pi_fb at (a, b) != 0.
inline FbPartials fb_partials(double a, double b) {
  const double r = std::hypot(a, b);
  return {a / r - 1.0, b / r - 1.0};
}

Index fb_length(const Dims& d) { return d.n + d.l + d.m + 4 * d.p; }

// Increment of pi_fb under argument increments (da, db), formed through the
// difference of squares so nothing cancels.
double fb_increment(double a, double b, double da, double db) {
  const double ap = a + da;
  const double bp = b + db;
  const double r = std::hypot(a, b);
  const double rp = std::hypot(ap, bp);
  const double denom = r + rp;
  const double dr = denom > 0.0 ? (da * (ap + a) + db * (bp + b)) / denom : 0.0;
  return dr - da - db;
}

// Increment of |v| given the increment of v.
double abs_increment(double v, double dv) {
  const double vp = v + dv;
  if (v >= 0.0 && vp >= 0.0) return dv;
  if (v <= 0.0 && vp <= 0.0) return -dv;
  return std::abs(vp) - std::abs(v);  // sign change: both values are <= |dv|
}

// Residual increment F_fb(z + step) - F_fb(z) for linear-quadratic
// problems; every entry is formed from increments, never from differences
// of independently rounded evaluations.
Vector lq_residual_fb_increment(const LinearQuadraticProblem& problem,
                                const PrimalDual& z, const Vector& step) {
  const Dims& d = problem.dims();
  const auto s_x = step.segment(d.offset_x(), d.n);
  const auto s_lambda = step.segment(d.offset_lambda(), d.l);
  const auto s_eta = step.segment(d.offset_eta(), d.m);
  const auto s_mu = step.segment(d.offset_mu(), d.p);
  const auto s_nu = step.segment(d.offset_nu(), d.p);

  Vector delta(fb_length(d));

  Vector d1 = problem.quadratic_term() * s_x;
  if (d.l > 0) d1 += problem.block_g().A.transpose() * s_lambda;
  if (d.m > 0) d1 += problem.block_h().A.transpose() * s_eta;
  if (d.p > 0) {
    d1 += problem.block_G().A.transpose() * s_mu;
    d1 += problem.block_H().A.transpose() * s_nu;
  }
  delta.head(d.n) = d1;

  if (d.l > 0) {
    const Vector g = problem.eval_g(z.x);
    const Vector dg = problem.block_g().A * s_x;
    for (Index i = 0; i < d.l; ++i) {
      delta(d.n + i) = fb_increment(-g(i), z.lambda(i), -dg(i), s_lambda(i));
    }
  }
  if (d.m > 0) delta.segment(d.n + d.l, d.m) = problem.block_h().A * s_x;

  if (d.p > 0) {
    const Vector G = problem.eval_G(z.x);
    const Vector H = problem.eval_H(z.x);
    const Vector dG = problem.block_G().A * s_x;
    const Vector dH = problem.block_H().A * s_x;
    for (Index i = 0; i < d.p; ++i) {
      const double a = G(i), b = H(i), mu = z.mu(i), nu = z.nu(i);
      const double da = dG(i), db = dH(i), dmu = s_mu(i), dnu = s_nu(i);
      const Index base = d.n + d.l + d.m + 4 * i;

      const double pi = ncp_fb(a, b);
      delta(base + 0) = abs_increment(pi, fb_increment(a, b, da, db));
      delta(base + 1) = fb_increment(std::abs(a), std::abs(mu),
                                     abs_increment(a, da),
                                     abs_increment(mu, dmu));
      delta(base + 2) = fb_increment(std::abs(b), std::abs(nu),
                                     abs_increment(b, db),
                                     abs_increment(nu, dnu));

      const bool off = mu <= 0.0 && nu <= 0.0;
      const bool off_p = mu + dmu <= 0.0 && nu + dnu <= 0.0;
      if (off && off_p) {
        delta(base + 3) = 0.0;
      } else if (!off && !off_p) {
        delta(base + 3) = fb_increment(std::abs(mu), std::abs(nu),
                                       abs_increment(mu, dmu),
                                       abs_increment(nu, dnu));
      } else if (off) {  // switches on: base value is zero
        delta(base + 3) = ncp_fb(std::abs(mu + dmu), std::abs(nu + dnu));
      } else {  // switches off: trial value is zero
        delta(base + 3) = -ncp_fb(std::abs(mu), std::abs(nu));
      }
    }
  }
  return delta;
}

}  // namespace

Vector assemble_residual_fb(const MpccProblem& problem, const PrimalDual& z) {
  if (z.dims() != problem.dims()) {
    throw std::invalid_argument("assemble_residual_fb: dimension mismatch");
  }
  const Dims& d = problem.dims();

  Vector F(fb_length(d));
  F.head(d.n) = lagrangian(problem, z).grad_x;

  if (d.l > 0) {
    const Vector g = problem.eval_g(z.x);
    for (Index i = 0; i < d.l; ++i) {
      F(d.n + i) = ncp_fb(-g(i), z.lambda(i));
    }
  }
  if (d.m > 0) F.segment(d.n + d.l, d.m) = problem.eval_h(z.x);
  if (d.p > 0) {
    const Vector G = problem.eval_G(z.x);
    const Vector H = problem.eval_H(z.x);
    for (Index i = 0; i < d.p; ++i) {
      const auto t = comp_measures_fb({G(i), H(i), z.mu(i), z.nu(i)});
      for (Index k = 0; k < 4; ++k) F(d.n + d.l + d.m + 4 * i + k) = t[k];
    }
  }
  return F;
}

MeritEval merit_eval(const MpccProblem& problem, const PrimalDual& z) {
  if (z.dims() != problem.dims()) {
    throw std::invalid_argument("merit_eval: dimension mismatch");
  }
  const Dims& d = problem.dims();

  MeritEval out;
  out.F_fb = assemble_residual_fb(problem, z);
  out.value = 0.5 * out.F_fb.squaredNorm();
  out.grad = Vector::Zero(d.total());

  auto grad_x = out.grad.segment(d.offset_x(), d.n);

  const Matrix jg = d.l > 0 ? problem.jac_g(z.x) : Matrix(0, d.n);
  const Matrix jh = d.m > 0 ? problem.jac_h(z.x) : Matrix(0, d.n);
  const Matrix jG = d.p > 0 ? problem.jac_G(z.x) : Matrix(0, d.n);
  const Matrix jH = d.p > 0 ? problem.jac_H(z.x) : Matrix(0, d.n);

  // Stationarity rows: exact Jacobian of grad_x L.
  const auto r1 = out.F_fb.head(d.n);
  grad_x += lagrangian(problem, z).hess_xx * r1;
  if (d.l > 0) out.grad.segment(d.offset_lambda(), d.l) += jg * r1;
  if (d.m > 0) out.grad.segment(d.offset_eta(), d.m) += jh * r1;
  if (d.p > 0) {
    out.grad.segment(d.offset_mu(), d.p) += jG * r1;
    out.grad.segment(d.offset_nu(), d.p) += jH * r1;
  }

  // NCP rows pi_fb(-g_i, lambda_i); contributions with zero residual value
  // are dropped (their true gradient contribution vanishes).
  if (d.l > 0) {
    const Vector g = problem.eval_g(z.x);
    for (Index i = 0; i < d.l; ++i) {
      const double v = out.F_fb(d.n + i);
      if (v == 0.0) continue;
      const FbPartials fb = fb_partials(-g(i), z.lambda(i));
      grad_x -= v * fb.da * jg.row(i).transpose();
      out.grad(d.offset_lambda() + i) += v * fb.db;
    }
  }

  // Equality rows.
  if (d.m > 0) grad_x += jh.transpose() * out.F_fb.segment(d.n + d.l, d.m);

  // The four smoothed complementarity measures per pair.
  if (d.p > 0) {
    const Vector G = problem.eval_G(z.x);
    const Vector H = problem.eval_H(z.x);
    for (Index i = 0; i < d.p; ++i) {
      const double a = G(i);
      const double b = H(i);
      const double mu = z.mu(i);
      const double nu = z.nu(i);
      const Index base = d.n + d.l + d.m + 4 * i;

      const double t1 = out.F_fb(base + 0);
      if (t1 != 0.0) {
        const double s = sign_of(ncp_fb(a, b));
        const FbPartials fb = fb_partials(a, b);
        grad_x += t1 * s *
                  (fb.da * jG.row(i).transpose() + fb.db * jH.row(i).transpose());
      }
      const double t2 = out.F_fb(base + 1);
      if (t2 != 0.0) {
        const FbPartials fb = fb_partials(std::abs(a), std::abs(mu));
        grad_x += t2 * fb.da * sign_of(a) * jG.row(i).transpose();
        out.grad(d.offset_mu() + i) += t2 * fb.db * sign_of(mu);
      }
      const double t3 = out.F_fb(base + 2);
      if (t3 != 0.0) {
        const FbPartials fb = fb_partials(std::abs(b), std::abs(nu));
        grad_x += t3 * fb.da * sign_of(b) * jH.row(i).transpose();
        out.grad(d.offset_nu() + i) += t3 * fb.db * sign_of(nu);
      }
      const double t4 = out.F_fb(base + 3);
      if (t4 != 0.0) {  // only reachable in the max(mu, nu) > 0 branch
        const FbPartials fb = fb_partials(std::abs(mu), std::abs(nu));
        out.grad(d.offset_mu() + i) += t4 * fb.da * sign_of(mu);
        out.grad(d.offset_nu() + i) += t4 * fb.db * sign_of(nu);
      }
    }
  }
  return out;
}

double merit_difference(const MpccProblem& problem, const PrimalDual& z,
                        const Vector& f_base, const Vector& step) {
  const Dims& d = problem.dims();
  if (f_base.size() != fb_length(d) || step.size() != d.total()) {
    throw std::invalid_argument("merit_difference: dimension mismatch");
  }

  Vector delta;
  if (const auto* lq = dynamic_cast<const LinearQuadraticProblem*>(&problem)) {
    delta = lq_residual_fb_increment(*lq, z, step);
  } else {
    const PrimalDual trial = PrimalDual::unstack(d, z.stack() + step);
    delta = assemble_residual_fb(problem, trial) - f_base;
  }
  // 0.5 (|F + delta|^2 - |F|^2) accumulated per component.
  double diff = 0.0;
  for (Index c = 0; c < delta.size(); ++c) {
    diff += delta(c) * (f_base(c) + 0.5 * delta(c));
  }
  return diff;
}

}  // namespace mstat
