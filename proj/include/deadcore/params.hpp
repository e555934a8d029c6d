#pragma once

#include <span>
#include <random>
#include <string>
#include <vector>

namespace deadcore {

/// Coupled dead-core system
///   |Du|^p F(D^2u, x) = v_+^lambda1,   |Dv|^q G(D^2v, x) = u_+^lambda2
/// with F, G uniformly elliptic in [ell_lo, ell_hi].
struct SystemParams {
  double p = 0.0;
  double q = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double ell_lo = 1.0;
  double ell_hi = 1.0;
  int n = 2;

  /// Throws ParameterError when the tuple is not admissible. The
  /// sub-homogeneity condition lambda1*lambda2 < (1+p)(1+q) is strict.
  void validate() const;

  /// (1+p)(1+q) - lambda1*lambda2.
  double denom() const { return (1.0 + p) * (1.0 + q) - lambda1 * lambda2; }
  /// (1+q)(2+p) + lambda1(2+q): numerator of the u exponent.
  double num_alpha() const { return (1.0 + q) * (2.0 + p) + lambda1 * (2.0 + q); }
  /// (1+p)(2+q) + lambda2(2+p): numerator of the v exponent.
  double num_beta() const { return (1.0 + p) * (2.0 + q) + lambda2 * (2.0 + p); }
};

/// Henon-type equation |Du|^p F(D^2u, x) = |x|^alpha u_+^mu.
struct HenonParams {
  double p = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double ell_lo = 1.0;
  double ell_hi = 1.0;
  int n = 2;

  /// Throws ParameterError on inadmissible tuples and returns non-fatal
  /// warnings (alpha == 0 is admitted for degeneration tests).
  /// With allow_critical the endpoint mu == 1+p is accepted; exponent
  /// formulas still reject it.
  std::vector<std::string> validate(bool allow_critical = false) const;
};

struct ExponentBundle {
  double alpha_u = 0.0;
  double beta_v = 0.0;
  double kappa = 0.0;
  double grad_u = 0.0;
  double grad_v = 0.0;
  double denom = 0.0;
};

ExponentBundle system_exponents(const SystemParams& params);

struct HenonExponents {
  double beta_h = 0.0;  ///< (2+p+alpha)/(1+p-mu)
  double grad_h = 0.0;  ///< (1+alpha+mu)/(1+p-mu)
};

HenonExponents henon_exponents(const HenonParams& params);

struct HenonTerm {
  double alpha = 0.0;
  double mu = 0.0;
};

/// min over i of (2+p+alpha_i)/(1+p-mu_i) and (2+p+l_i)/(1+p).
double multi_term_regularity(std::span<const HenonTerm> terms, std::span<const double> g_terms,
                             double p);

/// Behaviour at a critical point decided by tau = (1+alpha+mu)/(1+p-mu).
enum class CriticalDecay { holder_gradient, quadratic, super_quadratic };

double critical_tau(const HenonParams& params);
CriticalDecay critical_decay(const HenonParams& params);
/// Same classification from the sign of alpha - (p - 2 mu).
CriticalDecay critical_decay_by_weight(const HenonParams& params);

std::string to_string(CriticalDecay d);

/// Admissible tuple with p, q in [-0.5, 2], reaction orders below 0.9(1+p)
/// and 0.9(1+q), unit ellipticity, dimension n.
SystemParams random_system_params(std::mt19937_64& rng, int n);

/// p in [0, 2], alpha in [0, 2], mu in [0, 0.9(1+p)], unit ellipticity.
HenonParams random_henon_params(std::mt19937_64& rng, int n);

}  // namespace deadcore
