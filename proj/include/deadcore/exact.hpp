#pragma once

#include <utility>
#include <vector>

#include "deadcore/params.hpp"

namespace deadcore {

/// r -> coeff * (|x - center| - offset)_+^exponent.
struct RadialSolution {
  double coeff = 1.0;
  double exponent = 2.0;
  std::vector<double> center;
  double offset = 0.0;

  /// Throws ParameterError unless coeff > 0, exponent > 1, offset >= 0.
  void validate() const;

  double value_r(double r) const;
  double d1_r(double r) const;
  double d2_r(double r) const;
  /// Evaluated at a point of matching dimension (center empty means origin).
  double value(const std::vector<double>& x) const;
  double radius_of(const std::vector<double>& x) const;
};

enum class BarrierKind { super, sub };

struct ConstantPair {
  double A = 0.0;
  double B = 0.0;
};

/// Constants of the entire radial pair (A r^alpha, B r^beta). The super kind
/// uses ell_hi, the sub kind ell_lo.
ConstantPair system_constants(const SystemParams& params, BarrierKind kind);

/// Same constants with an explicit ellipticity value and dimension.
ConstantPair system_constants_with(const SystemParams& params, double ell, int n);

double henon_constant(const HenonParams& params);

enum class CoefficientForm { corrected, paper_literal };

/// One-variable profile c |x_axis|^exponent.
struct CoordinateProfile {
  double coeff = 0.0;
  double exponent = 0.0;
  int axis = 1;

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
};

CoordinateProfile coordinate_solution(const HenonParams& params, int axis,
                                      CoefficientForm form = CoefficientForm::corrected);

/// |u'|^p u'' - |t|^alpha u_+^mu for the profile at coordinate value t.
double coordinate_residual(const CoordinateProfile& prof, const HenonParams& params, double t);

enum class RadialOperator { trace_identity, pucci_plus, pucci_minus };

/// Closed-form residuals of the system at radius r (see RadialSolution).
/// Throws DeadCoreEvaluationError when r <= offset of either component.
std::pair<double, double> residual_radial(const RadialSolution& sol_u, const RadialSolution& sol_v,
                                          const SystemParams& params, RadialOperator op, double r);

/// Residuals divided by max(|lhs|, |rhs|, tiny).
std::pair<double, double> relative_residual_radial(const RadialSolution& sol_u,
                                                   const RadialSolution& sol_v,
                                                   const SystemParams& params, RadialOperator op,
                                                   double r);

/// Residual of ell_hi |u'|^p (u'' + (n-1)u'/r) = r^alpha u_+^mu for a radial profile.
double henon_residual_radial(const RadialSolution& sol, const HenonParams& params, double r);

/// min{A^(2/num_alpha), B^(2/num_beta)}; requires p, q >= 0.
double liouville_threshold(const SystemParams& params);

/// Entire radial pair (A r^alpha, B r^beta) centred at the origin in dimension params.n.
std::pair<RadialSolution, RadialSolution> entire_pair(const SystemParams& params, BarrierKind kind);

}  // namespace deadcore
