#include "deadcore/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "deadcore/errors.hpp"

namespace deadcore {

namespace {

void check_ellipticity(double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    std::ostringstream os;
    os << "ellipticity constants must satisfy 0 < ell_lo <= ell_hi (got " << lo << ", " << hi << ")";
    throw ParameterError(os.str());
  }
}

}  // namespace

void SystemParams::validate() const {
  for (double v : {p, q, lambda1, lambda2}) {
    if (!std::isfinite(v)) throw ParameterError("system parameters must be finite");
  }
  if (!(p > -1.0) || !(q > -1.0)) throw ParameterError("degeneracy exponents need p > -1 and q > -1");
  if (lambda1 < 0.0 || lambda2 < 0.0) throw ParameterError("reaction orders must be nonnegative");
  if (!(lambda1 * lambda2 < (1.0 + p) * (1.0 + q))) {
    std::ostringstream os;
    os << "reaction orders violate lambda1*lambda2 < (1+p)(1+q): " << lambda1 * lambda2
       << " >= " << (1.0 + p) * (1.0 + q);
    throw ParameterError(os.str());
  }
  check_ellipticity(ell_lo, ell_hi);
  if (n < 1) throw ParameterError("dimension n must be >= 1");
}

std::vector<std::string> HenonParams::validate(bool allow_critical) const {
  for (double v : {p, mu, alpha}) {
    if (!std::isfinite(v)) throw ParameterError("henon parameters must be finite");
  }
  if (p < 0.0) throw ParameterError("henon degeneracy exponent must satisfy p >= 0");
  if (mu < 0.0) throw ParameterError("absorption order must satisfy mu >= 0");
  if (allow_critical ? !(mu <= 1.0 + p) : !(mu < 1.0 + p)) {
    std::ostringstream os;
    os << "absorption order must satisfy mu " << (allow_critical ? "<=" : "<") << " 1+p (got mu=" << mu
       << ", p=" << p << ")";
    throw ParameterError(os.str());
  }
  if (alpha < 0.0) throw ParameterError("weight exponent must satisfy alpha >= 0");
  check_ellipticity(ell_lo, ell_hi);
  if (n < 1) throw ParameterError("dimension n must be >= 1");

  std::vector<std::string> warnings;
  if (alpha == 0.0) warnings.emplace_back("alpha = 0: unweighted degeneration (regularity theory assumes alpha > 0)");
  if (mu == 1.0 + p) warnings.emplace_back("mu = 1+p: critical absorption, no finite growth exponent");
  return warnings;
}

ExponentBundle system_exponents(const SystemParams& params) {
  params.validate();
  ExponentBundle e;
  e.denom = params.denom();
  e.alpha_u = params.num_alpha() / e.denom;
  e.beta_v = params.num_beta() / e.denom;
  e.kappa = 2.0 / e.denom;
  const double p = params.p, q = params.q, l1 = params.lambda1, l2 = params.lambda2;
  e.grad_u = ((1.0 + q) + l1 * (2.0 + q + l2)) / e.denom;
  e.grad_v = ((1.0 + p) + l2 * (2.0 + p + l1)) / e.denom;
  return e;
}

HenonExponents henon_exponents(const HenonParams& params) {
  params.validate();
  const double gap = 1.0 + params.p - params.mu;
  return {(2.0 + params.p + params.alpha) / gap, (1.0 + params.alpha + params.mu) / gap};
}

double multi_term_regularity(std::span<const HenonTerm> terms, std::span<const double> g_terms,
                             double p) {
  if (terms.empty()) throw ArgumentError("multi-term regularity needs at least one absorption term");
  if (!(p >= 0.0)) throw ParameterError("degeneracy exponent must satisfy p >= 0");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    if (t.alpha < 0.0) throw ParameterError("term weight exponent must be >= 0");
    if (t.mu < 0.0 || !(t.mu < 1.0 + p)) throw ParameterError("term absorption order must lie in [0, 1+p)");
    best = std::min(best, (2.0 + p + t.alpha) / (1.0 + p - t.mu));
  }
  for (double l : g_terms) {
    if (l < 0.0) throw ParameterError("source decay exponent must be >= 0");
    best = std::min(best, (2.0 + p + l) / (1.0 + p));
  }
  return best;
}

double critical_tau(const HenonParams& params) {
  params.validate();
  return (1.0 + params.alpha + params.mu) / (1.0 + params.p - params.mu);
}

CriticalDecay critical_decay(const HenonParams& params) {
  const double tau = critical_tau(params);
  if (tau < 1.0) return CriticalDecay::holder_gradient;
  if (tau == 1.0) return CriticalDecay::quadratic;
  return CriticalDecay::super_quadratic;
}

CriticalDecay critical_decay_by_weight(const HenonParams& params) {
  params.validate();
  const double threshold = params.p - 2.0 * params.mu;
  if (params.alpha < threshold) return CriticalDecay::holder_gradient;
  if (params.alpha == threshold) return CriticalDecay::quadratic;
  return CriticalDecay::super_quadratic;
}

std::string to_string(CriticalDecay d) {
  switch (d) {
    case CriticalDecay::holder_gradient: return "holder_gradient";
    case CriticalDecay::quadratic: return "quadratic";
    case CriticalDecay::super_quadratic: return "super_quadratic";
  }
  return "unknown";
}

SystemParams random_system_params(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> pq(-0.5, 2.0), unit(0.0, 1.0);
  SystemParams s;
  s.p = pq(rng);
  s.q = pq(rng);
  s.lambda1 = 0.9 * (1.0 + s.p) * unit(rng);
  s.lambda2 = 0.9 * (1.0 + s.q) * unit(rng);
  s.n = n;
  return s;
}

HenonParams random_henon_params(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> two(0.0, 2.0), unit(0.0, 1.0);
  HenonParams h;
  h.p = two(rng);
  h.alpha = two(rng);
  h.mu = 0.9 * (1.0 + h.p) * unit(rng);
  h.n = n;
  return h;
}

}  // namespace deadcore
