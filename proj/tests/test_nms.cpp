#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "mstat/nms.hpp"
#include "support/test_rng.hpp"

using namespace mstat;
using mstat_test::TestRng;

namespace {

Quad add(const Quad& w, const Quad& h) {
  return {w.a + h.a, w.b + h.b, w.mu + h.mu, w.nu + h.nu};
}

double norm_inf(const Quad& w) {
  return std::max({std::abs(w.a), std::abs(w.b), std::abs(w.mu),
                   std::abs(w.nu)});
}

bool row_is(const SignedUnit& u, int index, int sign) {
  return u.index == index && u.sign == sign;
}

// Points of the M set by case: 0 = a>0, 1 = b>0, 2 = mu<0 and nu<0,
// 3 = mu!=0 only, 4 = nu!=0 only, 5 = origin.
Quad make_m_point(int kase, TestRng& rng) {
  const double s = rng.uniform(0.5, 2.0);
  const double t = rng.uniform(0.5, 2.0);
  switch (kase) {
    case 0: return {s, 0.0, 0.0, rng.coin() ? t : 0.0};
    case 1: return {0.0, s, rng.coin() ? t : 0.0, 0.0};
    case 2: return {0.0, 0.0, -s, -t};
    case 3: return {0.0, 0.0, rng.coin() ? s : -s, 0.0};
    case 4: return {0.0, 0.0, 0.0, rng.coin() ? s : -s};
    default: return {0.0, 0.0, 0.0, 0.0};
  }
}

Quad random_quad(TestRng& rng, double box) {
  return {rng.uniform(-box, box), rng.uniform(-box, box),
          rng.uniform(-box, box), rng.uniform(-box, box)};
}

// Checks the derivative-class implications near an M point.
void check_class_restrictions(const Quad& base, JClass jc) {
  if (base.a > 0.0) CHECK(jc == JClass::J23);
  if (base.b > 0.0) CHECK(jc == JClass::J14);
  if (base.mu != 0.0) CHECK((jc == JClass::J12 || jc == JClass::J14));
  if (base.nu != 0.0) CHECK((jc == JClass::J12 || jc == JClass::J23));
}

}  // namespace

TEST_CASE("ncp_min values and tie convention") {
  auto e = ncp_min(2.0, 0.0);
  CHECK(e.value == 0.0);
  CHECK(e.da == 0.0);
  CHECK(e.db == 1.0);

  e = ncp_min(1.0, 1.0);  // tie goes to the first argument
  CHECK(e.value == 1.0);
  CHECK(e.da == 1.0);
  CHECK(e.db == 0.0);

  e = ncp_min(-3.0, 5.0);
  CHECK(e.value == -3.0);
  CHECK(e.da == 1.0);
}

TEST_CASE("ncp_fb values") {
  CHECK(ncp_fb(3.0, 4.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(ncp_fb(0.0, 0.0) == 0.0);
  for (double t : {0.0, 0.5, 1.0, 7.25}) {
    CHECK(ncp_fb(0.0, t) == 0.0);
  }
}

TEST_CASE("piece distances") {
  auto p = piece_distances({2, 2, 1, 0});
  CHECK(p == std::array<double, 3>{2, 2, 2});
  p = piece_distances({0, 0, -1, -2});
  CHECK(p == std::array<double, 3>{1, 2, 0});
  p = piece_distances({1, 0, 0, 0});
  CHECK(p == std::array<double, 3>{0, 1, 1});
}

TEST_CASE("nms_eval on the worked examples") {
  NmsEval e = nms_eval({1, 0, 0, 0});
  CHECK(e.value1 == 0.0);
  CHECK(e.value2 == 0.0);
  CHECK(row_is(e.deriv.row1, 2, +1));
  CHECK(row_is(e.deriv.row2, 3, +1));
  CHECK(e.deriv.jclass == JClass::J23);

  e = nms_eval({2, 2, 1, 0});
  CHECK(e.value1 == 2.0);
  CHECK(e.value2 == 1.0);
  CHECK(row_is(e.deriv.row1, 2, +1));
  CHECK(row_is(e.deriv.row2, 3, +1));

  e = nms_eval({0, 0, -1, -2});
  CHECK(e.value1 == 0.0);
  CHECK(e.value2 == 0.0);
  CHECK(row_is(e.deriv.row1, 1, +1));
  CHECK(row_is(e.deriv.row2, 2, +1));
  CHECK(e.deriv.jclass == JClass::J12);
}

TEST_CASE("comp_measures on the worked examples") {
  CHECK(comp_measures({0, 0, -1, -2}) == std::array<double, 4>{0, 0, 0, 0});
  CHECK(comp_measures({2, 2, 1, 0}) == std::array<double, 4>{2, 1, 0, 0});
  CHECK(comp_measures({0, 0, 1, 1}) == std::array<double, 4>{0, 0, 0, 1});
}

TEST_CASE("comp_measures_fb on the worked examples") {
  TestRng rng(11);
  for (int kase = 0; kase < 6; ++kase) {
    const auto t = comp_measures_fb(make_m_point(kase, rng));
    CHECK(t == std::array<double, 4>{0, 0, 0, 0});
  }
  const auto t = comp_measures_fb({0, 0, 1, 1});
  CHECK(t[0] == 0.0);
  CHECK(t[1] == 0.0);
  CHECK(t[2] == 0.0);
  CHECK(t[3] == doctest::Approx(std::sqrt(2.0) - 2.0).epsilon(1e-15));
  CHECK(comp_measures_fb({3, 4, 0, 0}) == std::array<double, 4>{2, 0, 0, 0});
}

TEST_CASE("dist_to_m_set on the worked examples") {
  CHECK(dist_to_m_set({2, 2, 1, 0}) == 2.0);
  CHECK(dist_to_m_set({1, 0, 0, 0}) == 0.0);
  CHECK(dist_to_m_set({0, 0, 1, 1}) == 1.0);
}

TEST_CASE("zero set, distance identity and max representation on a grid") {
  std::vector<double> ticks;
  for (double v = -2.0; v <= 2.0 + 1e-12; v += 0.5) ticks.push_back(v);

  for (double a : ticks) {
    for (double b : ticks) {
      for (double mu : ticks) {
        for (double nu : ticks) {
          const Quad w{a, b, mu, nu};
          const NmsEval e = nms_eval(w);
          const bool root = e.value1 == 0.0 && e.value2 == 0.0;
          REQUIRE(root == in_m_set(w));
          REQUIRE(e.value1 == dist_to_m_set(w));
          const auto t = comp_measures(w);
          REQUIRE(e.value1 == std::max({t[0], t[1], t[2], t[3]}));
          REQUIRE(std::abs(e.value2) <= e.value1);
        }
      }
    }
  }
}

TEST_CASE("zero set and distance identity on random points") {
  TestRng rng(23);
  for (int k = 0; k < 20000; ++k) {
    Quad w = random_quad(rng, 2.0);
    // Zero out a random subset of coordinates to land on and near M.
    if (rng.coin()) w.a = 0.0;
    if (rng.coin()) w.b = 0.0;
    if (rng.coin()) w.mu = 0.0;
    if (rng.coin()) w.nu = 0.0;

    const NmsEval e = nms_eval(w);
    const bool root = e.value1 == 0.0 && e.value2 == 0.0;
    REQUIRE(root == in_m_set(w));
    REQUIRE(e.value1 == dist_to_m_set(w));
    const auto t = comp_measures(w);
    REQUIRE(e.value1 == std::max({t[0], t[1], t[2], t[3]}));
    REQUIRE(std::abs(e.value2) <= e.value1);
  }
}

TEST_CASE("exact Newton expansion, class restrictions and calmness near M") {
  TestRng rng(37);
  for (int kase = 0; kase < 6; ++kase) {
    for (int rep = 0; rep < 200; ++rep) {
      const Quad base = make_m_point(kase, rng);
      const double eps = 1e-3 * (1.0 + norm_inf(base));
      for (int trial = 0; trial < 20; ++trial) {
        Quad h{rng.uniform(-eps, eps), rng.uniform(-eps, eps),
               rng.uniform(-eps, eps), rng.uniform(-eps, eps)};
        const Quad w = add(base, h);
        const NmsEval e = nms_eval(w);

        // phi(base) = 0, so the order-infinity expansion reduces to
        // phi(w) = Dphi(w) h, componentwise and exactly.
        CHECK(std::abs(e.value1 - e.deriv.row1.apply(h)) <= 1e-15);
        CHECK(std::abs(e.value2 - e.deriv.row2.apply(h)) <= 1e-15);

        check_class_restrictions(base, e.deriv.jclass);

        // Calmness with modulus one.
        CHECK(std::max(std::abs(e.value1), std::abs(e.value2)) <=
              norm_inf(h) * (1.0 + 1e-15));
      }
    }
  }
}

TEST_CASE("active-set characterization of the Newton equation") {
  TestRng rng(53);
  for (int k = 0; k < 5000; ++k) {
    const Quad w = random_quad(rng, 3.0);
    const NmsEval e = nms_eval(w);

    Quad dw = random_quad(rng, 3.0);
    switch (e.deriv.jclass) {
      case JClass::J23:
        dw.b = -w.b;
        dw.mu = -w.mu;
        break;
      case JClass::J14:
        dw.a = -w.a;
        dw.nu = -w.nu;
        break;
      case JClass::J12:
        dw.a = -w.a;
        dw.b = -w.b;
        break;
    }
    // Constructed increments solve Dphi(w) dw = -phi(w) exactly.
    CHECK(e.deriv.row1.apply(dw) == -e.value1);
    CHECK(e.deriv.row2.apply(dw) == -e.value2);

    // Violating one of the two active components breaks the equation.
    Quad bad = dw;
    switch (e.deriv.jclass) {
      case JClass::J23: bad.b += 0.5; break;
      case JClass::J14: bad.a += 0.5; break;
      case JClass::J12: bad.a += 0.5; break;
    }
    const bool solves = e.deriv.row1.apply(bad) == -e.value1 &&
                        e.deriv.row2.apply(bad) == -e.value2;
    CHECK_FALSE(solves);
  }
}

TEST_CASE("min and Fischer-Burmeister NCP functions are equivalent") {
  TestRng rng(71);
  const double lo = 2.0 / (2.0 + std::sqrt(2.0));
  const double hi = 2.0 + std::sqrt(2.0);
  for (int k = 0; k < 20000; ++k) {
    const double a = rng.uniform(-3.0, 3.0);
    const double b = rng.uniform(-3.0, 3.0);
    const double vmin = std::abs(ncp_min(a, b).value);
    const double vfb = std::abs(ncp_fb(a, b));
    CHECK(vfb >= lo * vmin * (1.0 - 1e-12));
    CHECK(vfb <= hi * vmin * (1.0 + 1e-12));
  }
}
