#include "deadcore/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "deadcore/errors.hpp"

namespace deadcore {

namespace {

double pow_pos(double t, double e) {
  if (t <= 0.0) return 0.0;
  if (e == 0.0) return 1.0;
  return std::pow(t, e);
}

// Radial Laplacian-type operator w'' + (n-1) w'/r with the chosen ellipticity
// factor. Profiles with exponent > 1 have nonnegative Hessian eigenvalues, so
// the Pucci operators act as scaled traces.
double radial_operator(const RadialSolution& s, int n, double coeff, double r) {
  return coeff * (s.d2_r(r) + (n - 1) * s.d1_r(r) / r);
}

double op_coeff(RadialOperator op, double lo, double hi) {
  switch (op) {
    case RadialOperator::trace_identity: return 1.0;
    case RadialOperator::pucci_plus: return hi;
    case RadialOperator::pucci_minus: return lo;
  }
  return 1.0;
}

}  // namespace

void RadialSolution::validate() const {
  if (!(coeff > 0.0) || !std::isfinite(coeff)) throw ParameterError("radial solution needs coeff > 0");
  if (!(exponent > 1.0)) throw ParameterError("radial solution needs exponent > 1");
  if (!(offset >= 0.0)) throw ParameterError("radial solution needs offset >= 0");
}

double RadialSolution::value_r(double r) const { return coeff * pow_pos(r - offset, exponent); }

double RadialSolution::d1_r(double r) const {
  const double s = r - offset;
  if (s <= 0.0) return 0.0;
  return coeff * exponent * std::pow(s, exponent - 1.0);
}

double RadialSolution::d2_r(double r) const {
  const double s = r - offset;
  if (s < 0.0) return 0.0;
  if (s == 0.0) return exponent == 2.0 ? 2.0 * coeff : 0.0;
  return coeff * exponent * (exponent - 1.0) * std::pow(s, exponent - 2.0);
}

double RadialSolution::radius_of(const std::vector<double>& x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double c = k < center.size() ? center[k] : 0.0;
    s += (x[k] - c) * (x[k] - c);
  }
  return std::sqrt(s);
}

double RadialSolution::value(const std::vector<double>& x) const { return value_r(radius_of(x)); }

ConstantPair system_constants_with(const SystemParams& params, double ell, int n) {
  params.validate();
  if (!(ell > 0.0)) throw ParameterError("ellipticity must be positive");
  const ExponentBundle e = system_exponents(params);
  const double ga = n + e.alpha_u - 2.0;
  const double gb = n + e.beta_v - 2.0;
  if (!(ga > 0.0) || !(gb > 0.0)) {
    std::ostringstream os;
    os << "radial constants undefined: n+alpha-2=" << ga << ", n+beta-2=" << gb;
    throw GeometryError(os.str());
  }
  const double p = params.p, q = params.q, l1 = params.lambda1, l2 = params.lambda2;
  const double a = ell * ga * std::pow(e.alpha_u, 1.0 + p);
  const double b = ell * gb * std::pow(e.beta_v, 1.0 + q);
  const double m = -e.denom;  // lambda1*lambda2 - (1+p)(1+q)
  ConstantPair c;
  c.A = std::pow(b, l1 / m) * std::pow(a, (1.0 + q) / m);
  c.B = std::pow(a, l2 / m) * std::pow(b, (1.0 + p) / m);
  return c;
}

ConstantPair system_constants(const SystemParams& params, BarrierKind kind) {
  params.validate();
  return system_constants_with(params, kind == BarrierKind::super ? params.ell_hi : params.ell_lo, params.n);
}

double henon_constant(const HenonParams& params) {
  params.validate();
  const double p = params.p, mu = params.mu, al = params.alpha;
  const double gap = 1.0 + p - mu;
  const double geo = params.n * gap + (2.0 * mu + al - p);
  if (!(geo > 0.0)) throw GeometryError("henon constant undefined: n(1+p-mu)+(2mu+alpha-p) <= 0");
  const double base = std::pow(gap, 2.0 + p) / (params.ell_hi * std::pow(2.0 + p + al, 1.0 + p) * geo);
  return std::pow(base, 1.0 / gap);
}

double CoordinateProfile::value(double t) const { return coeff * std::pow(std::abs(t), exponent); }

double CoordinateProfile::d1(double t) const {
  const double s = std::abs(t);
  if (s == 0.0) return 0.0;
  return (t > 0.0 ? 1.0 : -1.0) * coeff * exponent * std::pow(s, exponent - 1.0);
}

double CoordinateProfile::d2(double t) const {
  const double s = std::abs(t);
  if (s == 0.0) return exponent == 2.0 ? 2.0 * coeff : 0.0;
  return coeff * exponent * (exponent - 1.0) * std::pow(s, exponent - 2.0);
}

CoordinateProfile coordinate_solution(const HenonParams& params, int axis, CoefficientForm form) {
  params.validate();
  if (axis < 1 || axis > params.n) throw ArgumentError("axis must lie in 1..n");
  const double p = params.p, mu = params.mu, al = params.alpha;
  const double gap = 1.0 + p - mu;
  CoordinateProfile prof;
  prof.axis = axis;
  prof.exponent = (2.0 + p + al) / gap;
  if (form == CoefficientForm::corrected) {
    // A function of one coordinate has a rank-one Hessian, so the profile
    // constant does not depend on n.
    const double geo = 1.0 + al + mu;
    prof.coeff = std::pow(std::pow(gap, 2.0 + p) / (geo * std::pow(2.0 + p + al, 1.0 + p)), 1.0 / gap);
  } else {
    const double geo = (params.n - 2) * gap + (2.0 + p + al);
    if (!(geo > 0.0)) throw GeometryError("coordinate profile undefined: (n-2)(1+p-mu)+(2+p+alpha) <= 0");
    prof.coeff = std::pow(gap, 2.0 + p) / (geo * std::pow(2.0 + p + al, 1.0 + p));
  }
  return prof;
}

double coordinate_residual(const CoordinateProfile& prof, const HenonParams& params, double t) {
  const double lhs = std::pow(std::abs(prof.d1(t)), params.p) * prof.d2(t);
  const double rhs = pow_pos(std::abs(t), params.alpha) * pow_pos(prof.value(t), params.mu);
  return lhs - rhs;
}

namespace {

struct SideValues {
  double lhs1, rhs1, lhs2, rhs2;
};

SideValues radial_sides(const RadialSolution& su, const RadialSolution& sv, const SystemParams& params,
                        RadialOperator op, double r) {
  params.validate();
  su.validate();
  sv.validate();
  if (!(r > su.offset) || !(r > sv.offset)) {
    throw DeadCoreEvaluationError("radial residual requested inside the dead core");
  }
  const double c = op_coeff(op, params.ell_lo, params.ell_hi);
  SideValues s{};
  s.lhs1 = std::pow(std::abs(su.d1_r(r)), params.p) * radial_operator(su, params.n, c, r);
  s.rhs1 = pow_pos(sv.value_r(r), params.lambda1);
  s.lhs2 = std::pow(std::abs(sv.d1_r(r)), params.q) * radial_operator(sv, params.n, c, r);
  s.rhs2 = pow_pos(su.value_r(r), params.lambda2);
  return s;
}

}  // namespace

std::pair<double, double> residual_radial(const RadialSolution& sol_u, const RadialSolution& sol_v,
                                          const SystemParams& params, RadialOperator op, double r) {
  const SideValues s = radial_sides(sol_u, sol_v, params, op, r);
  return {s.lhs1 - s.rhs1, s.lhs2 - s.rhs2};
}

std::pair<double, double> relative_residual_radial(const RadialSolution& sol_u,
                                                   const RadialSolution& sol_v,
                                                   const SystemParams& params, RadialOperator op,
                                                   double r) {
  const SideValues s = radial_sides(sol_u, sol_v, params, op, r);
  const double tiny = std::numeric_limits<double>::min();
  const double d1 = std::max({std::abs(s.lhs1), std::abs(s.rhs1), tiny});
  const double d2 = std::max({std::abs(s.lhs2), std::abs(s.rhs2), tiny});
  return {(s.lhs1 - s.rhs1) / d1, (s.lhs2 - s.rhs2) / d2};
}

double henon_residual_radial(const RadialSolution& sol, const HenonParams& params, double r) {
  params.validate();
  sol.validate();
  if (!(r > sol.offset)) throw DeadCoreEvaluationError("radial residual requested inside the dead core");
  const double lhs = std::pow(std::abs(sol.d1_r(r)), params.p) * radial_operator(sol, params.n, params.ell_hi, r);
  const double rhs = pow_pos(r, params.alpha) * pow_pos(sol.value_r(r), params.mu);
  return lhs - rhs;
}

double liouville_threshold(const SystemParams& params) {
  params.validate();
  if (params.p < 0.0 || params.q < 0.0) {
    throw ParameterError("liouville threshold is only available for p, q >= 0");
  }
  const ConstantPair c = system_constants(params, BarrierKind::super);
  return std::min(std::pow(c.A, 2.0 / params.num_alpha()), std::pow(c.B, 2.0 / params.num_beta()));
}

std::pair<RadialSolution, RadialSolution> entire_pair(const SystemParams& params, BarrierKind kind) {
  const ConstantPair c = system_constants(params, kind);
  const ExponentBundle e = system_exponents(params);
  RadialSolution u{c.A, e.alpha_u, std::vector<double>(params.n, 0.0), 0.0};
  RadialSolution v{c.B, e.beta_v, std::vector<double>(params.n, 0.0), 0.0};
  return {u, v};
}

}  // namespace deadcore
