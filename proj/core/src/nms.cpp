#include "mstat/nms.hpp"

#include <algorithm>
#include <cmath>

namespace mstat {

namespace {

// Sign convention shared by all |.| compositions: +1 at zero.
inline int sign_of(double x) { return x >= 0.0 ? +1 : -1; }

inline double coord(const Quad& w, int index) {
  switch (index) {
    case 1: return w.a;
    case 2: return w.b;
    case 3: return w.mu;
    default: return w.nu;
  }
}

struct Term {
  double value;
  SignedUnit row;
};

// First-index priority: a later term replaces the incumbent only if it is
// strictly better, so ties resolve to the earliest term.
template <std::size_t N>
const Term& pick_max(const std::array<Term, N>& terms) {
  const Term* best = &terms[0];
  for (std::size_t k = 1; k < N; ++k) {
    if (terms[k].value > best->value) best = &terms[k];
  }
  return *best;
}

template <std::size_t N>
const Term& pick_min(const std::array<Term, N>& terms) {
  const Term* best = &terms[0];
  for (std::size_t k = 1; k < N; ++k) {
    if (terms[k].value < best->value) best = &terms[k];
  }
  return *best;
}

inline JClass classify(int i, int j) {
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  if (lo == 1 && hi == 2) return JClass::J12;
  if (lo == 2 && hi == 3) return JClass::J23;
  return JClass::J14;  // {1,4} by construction of the cases
}

}  // namespace

double SignedUnit::apply(const Quad& w) const {
  return static_cast<double>(sign) * coord(w, index);
}

NcpMinEval ncp_min(double a, double b) {
  if (a <= b) return {a, 1.0, 0.0};
  return {b, 0.0, 1.0};
}

double ncp_fb(double a, double b) { return std::hypot(a, b) - a - b; }

std::array<double, 3> piece_distances(const Quad& w) {
  const double d1 = std::max({-w.a, std::abs(w.b), std::abs(w.mu)});
  const double d2 = std::max({-w.b, std::abs(w.a), std::abs(w.nu)});
  const double d3 = std::max({std::abs(w.a), std::abs(w.b), w.mu, w.nu});
  return {d1, d2, d3};
}

NmsEval nms_eval(const Quad& w) {
  const auto psi = piece_distances(w);
  const double value1 = std::min({psi[0], psi[1], psi[2]});

  // Terms of the selected max expression, in declaration order, each carrying
  // the chain-rule row (abs contributes its sign, plain coordinates +1,
  // negated coordinates -1).
  SignedUnit row1;
  if (value1 == psi[0]) {
    const std::array<Term, 3> t{{{-w.a, {1, -1}},
                                 {std::abs(w.b), {2, sign_of(w.b)}},
                                 {std::abs(w.mu), {3, sign_of(w.mu)}}}};
    row1 = pick_max(t).row;
  } else if (value1 == psi[1]) {
    const std::array<Term, 3> t{{{-w.b, {2, -1}},
                                 {std::abs(w.a), {1, sign_of(w.a)}},
                                 {std::abs(w.nu), {4, sign_of(w.nu)}}}};
    row1 = pick_max(t).row;
  } else {
    const std::array<Term, 4> t{{{std::abs(w.a), {1, sign_of(w.a)}},
                                 {std::abs(w.b), {2, sign_of(w.b)}},
                                 {w.mu, {3, +1}},
                                 {w.nu, {4, +1}}}};
    row1 = pick_max(t).row;
  }

  // Second component, selected by the row index of the first derivative.
  SignedUnit row2;
  switch (row1.index) {
    case 1: {
      const std::array<Term, 2> t{{{std::abs(w.b), {2, sign_of(w.b)}},
                                   {std::abs(w.nu), {4, sign_of(w.nu)}}}};
      row2 = pick_min(t).row;
      break;
    }
    case 2: {
      const std::array<Term, 2> t{{{std::abs(w.a), {1, sign_of(w.a)}},
                                   {std::abs(w.mu), {3, sign_of(w.mu)}}}};
      row2 = pick_min(t).row;
      break;
    }
    case 3:
      row2 = {2, sign_of(w.b)};
      break;
    default:
      row2 = {1, sign_of(w.a)};
      break;
  }

  NmsEval out;
  out.value1 = value1;
  // Selection property: the stored value equals the row applied to w.
  out.value2 = row2.apply(w);
  out.deriv = {row1, row2, classify(row1.index, row2.index)};
  return out;
}

std::array<double, 4> comp_measures(const Quad& w) {
  const double t1 = std::abs(std::min(w.a, w.b));
  const double t2 = std::min(std::abs(w.a), std::abs(w.mu));
  const double t3 = std::min(std::abs(w.b), std::abs(w.nu));
  const double t4 = std::max(
      {0.0, std::min(w.mu, std::abs(w.nu)), std::min(w.nu, std::abs(w.mu))});
  return {t1, t2, t3, t4};
}

std::array<double, 4> comp_measures_fb(const Quad& w) {
  const double t1 = std::abs(ncp_fb(w.a, w.b));
  const double t2 = ncp_fb(std::abs(w.a), std::abs(w.mu));
  const double t3 = ncp_fb(std::abs(w.b), std::abs(w.nu));
  const double t4 = (w.mu <= 0.0 && w.nu <= 0.0)
                        ? 0.0
                        : ncp_fb(std::abs(w.mu), std::abs(w.nu));
  return {t1, t2, t3, t4};
}

double dist_to_m_set(const Quad& w) {
  const double plus_mu = std::max(w.mu, 0.0);
  const double plus_nu = std::max(w.nu, 0.0);
  const double d1 = std::max({0.0, -w.a, std::abs(w.b), std::abs(w.mu)});
  const double d2 = std::max({0.0, -w.b, std::abs(w.a), std::abs(w.nu)});
  const double d3 = std::max({std::abs(w.a), std::abs(w.b), plus_mu, plus_nu});
  return std::min({d1, d2, d3});
}

bool in_m_set(const Quad& w) {
  const bool comp = w.a >= 0.0 && w.b >= 0.0 && w.a * w.b == 0.0;
  const bool orth = w.a * w.mu == 0.0 && w.b * w.nu == 0.0;
  const bool biact = w.mu * w.nu == 0.0 || (w.mu < 0.0 && w.nu < 0.0);
  return comp && orth && biact;
}

}  // namespace mstat
