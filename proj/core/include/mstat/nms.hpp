#pragma once

#include <array>

namespace mstat {

/// One complementarity pair with its multipliers: a = G_i(x), b = H_i(x),
/// mu and nu the corresponding dual variables.
struct Quad {
  double a = 0.0;
  double b = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

/// Which coordinate pair the two derivative rows of the NMS function select.
enum class JClass { J12, J23, J14 };

/// The row sign * e_index^T of a 1x4 Newton derivative; index is 1-based
/// into (a, b, mu, nu), sign is +1 or -1.
struct SignedUnit {
  int index = 1;
  int sign = +1;

  /// Row applied to a quadruple, i.e. sign * w[index].
  double apply(const Quad& w) const;
};

/// The 2x4 Newton derivative of the NMS function: one signed unit row per
/// component, plus the class tag derived from the two row indices.
struct DerivPattern {
  SignedUnit row1;  // derivative of the first component
  SignedUnit row2;  // derivative of the second component
  JClass jclass = JClass::J12;
};

/// Value and Newton derivative of the NMS function at a quadruple.
/// Invariants: value1 >= 0 and |value2| <= value1.
struct NmsEval {
  double value1 = 0.0;
  double value2 = 0.0;
  DerivPattern deriv;
};

/// min(a, b) together with its Newton derivative (da, db). Ties resolve to
/// the first argument: deriv = (1,0) iff a <= b.
struct NcpMinEval {
  double value = 0.0;
  double da = 0.0;
  double db = 0.0;
};

NcpMinEval ncp_min(double a, double b);

/// Fischer-Burmeister NCP function sqrt(a^2 + b^2) - a - b.
double ncp_fb(double a, double b);

/// Sup-norm distances to the three convex pieces of the M-stationarity set:
/// {a >= 0, b = mu = 0}, {b >= 0, a = nu = 0}, {a = b = 0, mu <= 0, nu <= 0}.
std::array<double, 3> piece_distances(const Quad& w);

/// The NMS function: first component is the min of the three piece
/// distances, second component is selected by the derivative row of the
/// first. Derivative rows follow the first-index priority rule for min/max
/// and the sign convention D|.|(0) = +1; all comparisons are exact.
NmsEval nms_eval(const Quad& w);

/// The four-term max representation of the first NMS component:
/// (|min(a,b)|, min(|a|,|mu|), min(|b|,|nu|), max(0, min(mu,|nu|), min(nu,|mu|))).
std::array<double, 4> comp_measures(const Quad& w);

/// Fischer-Burmeister counterparts of comp_measures; all four vanish exactly
/// on the M-stationarity set and each is continuously differentiable after
/// squaring.
std::array<double, 4> comp_measures_fb(const Quad& w);

/// Independent distance oracle: the sup-norm distance of w to the
/// M-stationarity set, computed as the min of the closed-form distances to
/// its three convex pieces. Kept separate from nms_eval so the two can be
/// cross-checked.
double dist_to_m_set(const Quad& w);

/// Membership predicate for the M-stationarity set:
/// 0 <= a, b >= 0, ab = 0, a*mu = 0, b*nu = 0, and mu*nu = 0 or both negative.
bool in_m_set(const Quad& w);

}  // namespace mstat
