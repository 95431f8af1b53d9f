#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mstat/lq_problem.hpp"
#include "mstat/residual.hpp"
#include "support/nonlinear_problem.hpp"
#include "support/roots.hpp"
#include "support/test_rng.hpp"

using namespace mstat;
using namespace mstat_test;

namespace {

Vector random_vector(TestRng& rng, Index n, double box) {
  Vector x(n);
  for (Index i = 0; i < n; ++i) x(i) = rng.uniform(-box, box);
  return x;
}

PrimalDual perturb(const PrimalDual& z, TestRng& rng, double radius) {
  const Dims d = z.dims();
  return PrimalDual::unstack(d, z.stack() + random_vector(rng, d.total(), radius));
}

}  // namespace

TEST_CASE("residual vanishes at the reference roots") {
  const auto toy = make_toy(0.1);
  CHECK(assemble_residual(*toy, toy_root()).F.norm() == 0.0);
  CHECK(assemble_residual(*toy, toy_root(true)).F.norm() == 0.0);

  const auto pert = make_perturbed(0.2);
  CHECK(assemble_residual(*pert, perturbed_root(0.2)).F.norm() == 0.0);

  const auto obst = make_obstacle(4);
  for (std::uint64_t mask : {0ull, 5ull, 15ull}) {
    CHECK(assemble_residual(*obst, obstacle_root(4, mask)).norm_inf() <=
          1e-14);
  }
}

TEST_CASE("one-step identity for linear-quadratic problems near a root") {
  TestRng rng(19);
  const auto toy = make_toy(0.1);
  const auto obst = make_obstacle(4);
  const PrimalDual toy_ref = toy_root();
  const PrimalDual obst_ref = obstacle_root(4, 9);

  for (int rep = 0; rep < 200; ++rep) {
    for (const auto& [problem, ref] :
         {std::pair<const MpccProblem*, const PrimalDual*>{toy.get(), &toy_ref},
          {obst.get(), &obst_ref}}) {
      const PrimalDual z = perturb(*ref, rng, 1e-3);
      const ResidualEval eval = assemble_residual(*problem, z);
      const NewtonMatrix newton = assemble_newton(*problem, z, eval);
      const Vector predicted = newton.DF * (z.stack() - ref->stack());
      CHECK((eval.F - predicted).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
  }
}

TEST_CASE("directional derivative consistency at generic points") {
  TestRng rng(31);
  const NonlinearTestProblem nonlinear;
  const auto toy = make_toy(0.1);
  const double t = 1e-7;

  // Not every random direction keeps the derivative selections fixed; skip
  // draws that land on a selection boundary by re-checking the patterns.
  for (const MpccProblem* problem :
       std::vector<const MpccProblem*>{&nonlinear, toy.get()}) {
    const Dims& d = problem->dims();
    int checked = 0;
    for (int rep = 0; rep < 200 && checked < 100; ++rep) {
      const PrimalDual z = PrimalDual::unstack(d, random_vector(rng, d.total(), 2.0));
      const Vector dir = random_vector(rng, d.total(), 1.0);
      const PrimalDual zt = PrimalDual::unstack(d, z.stack() + t * dir);

      const ResidualEval e0 = assemble_residual(*problem, z);
      const ResidualEval e1 = assemble_residual(*problem, zt);

      bool same_selection = true;
      for (Index i = 0; i < d.l; ++i) {
        if (e0.ncp[i].da != e1.ncp[i].da) same_selection = false;
      }
      for (Index i = 0; i < d.p; ++i) {
        const auto& p0 = e0.nms[i].deriv;
        const auto& p1 = e1.nms[i].deriv;
        if (p0.row1.index != p1.row1.index || p0.row1.sign != p1.row1.sign ||
            p0.row2.index != p1.row2.index || p0.row2.sign != p1.row2.sign) {
          same_selection = false;
        }
      }
      if (!same_selection) continue;

      const NewtonMatrix newton = assemble_newton(*problem, z, e0);
      const Vector fd = (e1.F - e0.F) / t;
      const Vector an = newton.DF * dir;
      CHECK((fd - an).norm() <= 1e-5 * std::max(1.0, an.norm()));
      ++checked;
    }
    CHECK(checked >= 100);
  }
}

TEST_CASE("Newton matrix blocks at the toy root") {
  const auto toy = make_toy(0.1);
  const PrimalDual z = toy_root();
  const ResidualEval eval = assemble_residual(*toy, z);

  // -g_i = 0 and lambda_i > 0, so the min picks the constraint side.
  REQUIRE(eval.ncp.size() == 2);
  for (const NcpMinEval& e : eval.ncp) {
    CHECK(e.da == 1.0);
    CHECK(e.db == 0.0);
  }

  const NewtonMatrix newton = assemble_newton(*toy, z, eval);
  const Matrix jg = toy->jac_g(z.x);
  const Dims& d = toy->dims();
  for (Index i = 0; i < d.l; ++i) {
    const Index row = d.offset_lambda() + i;
    CHECK(newton.DF.block(row, 0, 1, d.n) == -jg.row(i));        // A1
    CHECK(newton.DF(row, d.offset_lambda() + i) == 0.0);         // A2
  }

  // Biactive pair with mu = 2 != 0: class J12, so the two NMS rows act on
  // x only and the mu/nu columns of the last block are zero.
  CHECK(eval.nms[0].deriv.jclass == JClass::J12);
  CHECK(newton.DF(d.offset_mu(), d.offset_mu()) == 0.0);
  CHECK(newton.DF(d.offset_mu() + 1, d.offset_nu()) == 0.0);
}

TEST_CASE("partition extraction") {
  const auto toy = make_toy(0.1);
  const auto part_toy = extract_partition(assemble_residual(*toy, toy_root()));
  CHECK(part_toy.il1 == std::vector<Index>{0, 1});
  CHECK(part_toy.ip12 == std::vector<Index>{0});
  CHECK(part_toy.ip_mu == std::vector<Index>{0});
  CHECK(part_toy.ip_nu == std::vector<Index>{0});

  // G > 0 forces class J23: the H row stays active and mu is eliminated.
  const auto pert = make_perturbed(0.2);
  const auto part_pert =
      extract_partition(assemble_residual(*pert, perturbed_root(0.2)));
  CHECK(part_pert.ip23 == std::vector<Index>{0});
  CHECK(part_pert.ip_mu.empty());
  CHECK(part_pert.ip_nu == std::vector<Index>{0});

  // Strictly inactive inequalities with zero multipliers leave il1 empty.
  PrimalDual slack = PrimalDual::zero(toy->dims());
  slack.x << 1.0, 1.0, 0.0;
  const auto part_slack = extract_partition(assemble_residual(*toy, slack));
  CHECK(part_slack.il1.empty());
}

TEST_CASE("pattern and value stay coherent") {
  TestRng rng(47);
  const auto toy = make_toy(0.1);
  const auto obst = make_obstacle(3);
  for (const MpccProblem* problem :
       std::vector<const MpccProblem*>{toy.get(), obst.get()}) {
    const Dims& d = problem->dims();
    for (int rep = 0; rep < 500; ++rep) {
      PrimalDual z = PrimalDual::unstack(d, random_vector(rng, d.total(), 3.0));
      if (rng.coin()) z.x.setZero();  // also exercise active points
      const ResidualEval eval = assemble_residual(*problem, z);

      const Vector g = problem->eval_g(z.x);
      for (Index i = 0; i < d.l; ++i) {
        const NcpMinEval& e = eval.ncp[i];
        CHECK(e.da + e.db == 1.0);
        CHECK(e.value == e.da * -g(i) + e.db * z.lambda(i));
      }
      const Vector G = problem->eval_G(z.x);
      const Vector H = problem->eval_H(z.x);
      for (Index i = 0; i < d.p; ++i) {
        const NmsEval& e = eval.nms[i];
        const Quad w{G(i), H(i), z.mu(i), z.nu(i)};
        CHECK(e.value1 == e.deriv.row1.apply(w));
        CHECK(e.value2 == e.deriv.row2.apply(w));
        CHECK(eval.F(d.offset_mu() + 2 * i) == e.value1);
        CHECK(eval.F(d.offset_mu() + 2 * i + 1) == e.value2);
      }
    }
  }
}

TEST_CASE("roots of F match the stationarity classification") {
  const auto toy = make_toy(0.1);
  CHECK(classify_stationarity(*toy, toy_root()) == Stationarity::m_stationary);
  CHECK(assemble_residual(*toy, toy_root()).F.norm() == 0.0);

  const auto pert = make_perturbed(0.2);
  CHECK(classify_stationarity(*pert, perturbed_root(0.2)) ==
        Stationarity::s_stationary);
  CHECK(assemble_residual(*pert, perturbed_root(0.2)).F.norm() == 0.0);

  // A clearly non-stationary point has a visibly nonzero residual.
  TestRng rng(61);
  for (int rep = 0; rep < 100; ++rep) {
    PrimalDual z = PrimalDual::unstack(toy->dims(),
                                       random_vector(rng, toy->dims().total(), 3.0));
    const double rnorm = assemble_residual(*toy, z).norm_inf();
    const Stationarity cls = classify_stationarity(*toy, z);
    if (cls == Stationarity::m_stationary || cls == Stationarity::s_stationary) {
      CHECK(rnorm <= 1e-4);
    } else {
      CHECK(rnorm > 1e-8);
    }
  }
}
