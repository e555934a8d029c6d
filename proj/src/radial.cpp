#include "deadcore/radial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "deadcore/errors.hpp"
#include "deadcore/exact.hpp"
#include "deadcore/field_io.hpp"
#include "deadcore/newton.hpp"
#include "deadcore/reaction.hpp"

namespace deadcore {

namespace {

struct FieldLaw {
  double p = 0.0;       // degeneracy exponent
  double order = 0.0;   // reaction order
  int source = 0;       // field feeding the reaction
  double weight = 0.0;  // r^weight in front of the reaction
};

class RadialProblem : public NonlinearProblem {
 public:
  RadialProblem(int n, double R, int N, double ell, double delta, double eta, std::vector<FieldLaw> laws,
                std::vector<double> bc)
      : n_(n), N_(N), h_(R / N), ell_(ell), delta_(delta), eta_(eta), laws_(std::move(laws)), bc_(std::move(bc)) {
    nf_ = static_cast<int>(laws_.size());
    nonneg_.assign(static_cast<std::size_t>(N_) * nf_, 1);
    w_.resize(N_);
    for (int k = 0; k < N_; ++k) {
      const double r = k * h_;
      w_[k].resize(nf_);
      for (int f = 0; f < nf_; ++f) w_[k][f] = laws_[f].weight == 0.0 ? 1.0 : std::pow(r, laws_[f].weight);
    }
  }

  std::size_t size() const override { return static_cast<std::size_t>(N_) * nf_; }
  const std::vector<char>& nonnegative() const override { return nonneg_; }

  double at(const Eigen::VectorXd& x, int k, int f) const { return k >= N_ ? bc_[f] : x[k * nf_ + f]; }

  struct Local {
    double L, dLm, dL0, dLp;  // L u and its partials
    double g, dgm, dgp;       // u' and its partials
  };

  Local local(const Eigen::VectorXd& x, int k, int f) const {
    Local o{};
    const double h2 = h_ * h_;
    const double u0 = at(x, k, f), up = at(x, k + 1, f);
    if (k == 0) {
      o.L = 2.0 * n_ * (up - u0) / h2;
      o.dL0 = -2.0 * n_ / h2;
      o.dLp = 2.0 * n_ / h2;
      return o;
    }
    const double um = at(x, k - 1, f);
    const double c = (n_ - 1) / (k * h_) / (2.0 * h_);
    o.L = (up - 2.0 * u0 + um) / h2 + c * (up - um);
    o.dLm = 1.0 / h2 - c;
    o.dL0 = -2.0 / h2;
    o.dLp = 1.0 / h2 + c;
    o.g = (up - um) / (2.0 * h_);
    o.dgm = -1.0 / (2.0 * h_);
    o.dgp = 1.0 / (2.0 * h_);
    return o;
  }

  double pseudo_time_sign() const override { return 1.0; }

  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& F) override {
    F.resize(static_cast<Eigen::Index>(size()));
    for (int k = 0; k < N_; ++k)
      for (int f = 0; f < nf_; ++f) {
        const FieldLaw& law = laws_[f];
        const Local o = local(x, k, f);
        const double g2 = o.g * o.g + delta_ * delta_;
        const double phi = law.p == 0.0 ? 1.0 : std::pow(g2, 0.5 * law.p);
        const double rhs = w_[k][f] * reaction_power(at(x, k, law.source), law.order, eta_);
        F[k * nf_ + f] = ell_ * phi * o.L - rhs;
      }
  }

  void jacobian(const Eigen::VectorXd& x, SpMat& J) override {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(size() * 5);
    for (int k = 0; k < N_; ++k)
      for (int f = 0; f < nf_; ++f) {
        const FieldLaw& law = laws_[f];
        const Local o = local(x, k, f);
        const double g2 = o.g * o.g + delta_ * delta_;
        const double phi = law.p == 0.0 ? 1.0 : std::pow(g2, 0.5 * law.p);
        const double dphi = law.p == 0.0 ? 0.0 : law.p * phi / g2 * o.g;  // d phi / d g
        const int row = k * nf_ + f;
        if (k > 0) t.emplace_back(row, (k - 1) * nf_ + f, ell_ * (phi * o.dLm + dphi * o.dgm * o.L));
        double diag = ell_ * phi * o.dL0;
        if (k + 1 < N_) t.emplace_back(row, (k + 1) * nf_ + f, ell_ * (phi * o.dLp + dphi * o.dgp * o.L));
        const double dr = w_[k][f] * reaction_power_derivative(at(x, k, law.source), law.order, eta_);
        if (law.source == f) {
          diag -= dr;
        } else {
          t.emplace_back(row, k * nf_ + law.source, -dr);
        }
        t.emplace_back(row, row, diag);
      }
    J.resize(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
    J.setFromTriplets(t.begin(), t.end());
    J.makeCompressed();
  }

  int nf() const { return nf_; }
  void set_eta(double eta) { eta_ = eta; }
  double eta() const { return eta_; }

 private:
  int n_, N_;
  double h_, ell_, delta_, eta_;
  std::vector<FieldLaw> laws_;
  std::vector<double> bc_;
  int nf_ = 1;
  std::vector<char> nonneg_;
  std::vector<std::vector<double>> w_;
};

void check_common(double R, int N, double tol, int max_iter) {
  if (!(R > 0.0)) throw ArgumentError("radius R must be positive");
  if (N < 100) throw ArgumentError("radial solver needs N >= 100");
  if (!(tol > 0.0)) throw ArgumentError("tolerance must be positive");
  if (max_iter < 1) throw ArgumentError("max_iter must be >= 1");
}

// Mesh sizes for the nested start: halve while the coarse mesh keeps at least
// kCoarsest intervals.
constexpr int kCoarsest = 250;

RadialProfile run(RadialProblem& prob, double R, int N, std::vector<double> bc, double tol, int max_iter,
                  const RadialOptions& opts, const RadialProfile* coarse) {
  const int nf = prob.nf();
  Eigen::VectorXd x(static_cast<Eigen::Index>(prob.size()));
  const double h = R / N;
  if (coarse == nullptr) {
    for (int k = 0; k < N; ++k)
      for (int f = 0; f < nf; ++f) x[k * nf + f] = bc[f] * (k * h) / R;
  } else {
    const int Nc = static_cast<int>(coarse->r.size()) - 1;
    const double hc = R / Nc;
    for (int k = 0; k < N; ++k) {
      const double s = k * h / hc;
      const int kc = std::min(static_cast<int>(s), Nc - 1);
      const double a = s - kc;
      x[k * nf] = (1 - a) * coarse->u[kc] + a * coarse->u[kc + 1];
      if (nf == 2) x[k * nf + 1] = (1 - a) * coarse->v[kc] + a * coarse->v[kc + 1];
    }
  }
  NewtonOptions no;
  no.tol = tol;
  no.max_iter = max_iter;
  no.pseudo_dt = opts.pseudo_dt;
  NewtonResult res;
  int total = 0;
  if (coarse == nullptr) {
    // Homotopy in the reaction ramp width: start smooth, then sharpen.
    const double target = prob.eta();
    const double scale = std::max(1.0, *std::max_element(bc.begin(), bc.end()));
    for (double eta = 1e-2 * scale; eta > target; eta *= 1e-2) {
      prob.set_eta(eta);
      res = newton_solve(prob, x, no);
      total += res.iterations;
    }
    prob.set_eta(target);
  }
  res = newton_solve(prob, x, no);
  RadialProfile out;
  out.iterations = total + res.iterations;
  out.residual = res.residual;
  out.fb_factor = opts.fb_factor;
  out.r.resize(N + 1);
  out.u.resize(N + 1);
  if (nf == 2) out.v.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    out.r[k] = k == N ? R : k * h;
    out.u[k] = k == N ? bc[0] : x[k * nf];
    if (nf == 2) out.v[k] = k == N ? bc[1] : x[k * nf + 1];
  }
  out.bc_scale = *std::max_element(bc.begin(), bc.end());
  return out;
}

}  // namespace

double RadialProfile::magnitude(std::size_t k) const { return has_v() ? std::max(u[k], v[k]) : u[k]; }

std::optional<std::size_t> RadialProfile::free_boundary_node() const {
  const double thr = fb_factor * std::numeric_limits<double>::epsilon() * bc_scale;
  for (std::size_t k = r.size(); k-- > 0;)
    if (magnitude(k) < thr) return k;
  return std::nullopt;
}

std::optional<double> RadialProfile::free_boundary_radius() const {
  const auto k = free_boundary_node();
  if (!k) return std::nullopt;
  return r[*k];
}

RadialProfile solve_radial_system(const SystemParams& params, double R, double bc_u, double bc_v, int N,
                                  double tol, int max_iter, const RadialOptions& opts) {
  params.validate();
  check_common(R, N, tol, max_iter);
  if (bc_u < 0.0 || bc_v < 0.0) throw ArgumentError("boundary data must be nonnegative");
  const double delta = opts.delta > 0.0 ? opts.delta : R / N;
  std::vector<FieldLaw> laws = {{params.p, params.lambda1, 1, 0.0}, {params.q, params.lambda2, 0, 0.0}};
  std::optional<RadialProfile> coarse;
  if (N >= 2 * kCoarsest) coarse = solve_radial_system(params, R, bc_u, bc_v, N / 2, tol, max_iter, opts);
  RadialProblem prob(params.n, R, N, params.ell_hi, delta, opts.eta, laws, {bc_u, bc_v});
  RadialProfile out = run(prob, R, N, {bc_u, bc_v}, tol, max_iter, opts, coarse ? &*coarse : nullptr);
  out.params = params;
  return out;
}

RadialProfile solve_radial_henon(const HenonParams& params, double R, double bc, int N, double tol, int max_iter,
                                 const RadialOptions& opts) {
  params.validate();
  check_common(R, N, tol, max_iter);
  if (bc < 0.0) throw ArgumentError("boundary data must be nonnegative");
  const double delta = opts.delta > 0.0 ? opts.delta : R / N;
  std::vector<FieldLaw> laws = {{params.p, params.mu, 0, params.alpha}};
  std::optional<RadialProfile> coarse;
  if (N >= 2 * kCoarsest) coarse = solve_radial_henon(params, R, bc, N / 2, tol, max_iter, opts);
  RadialProblem prob(params.n, R, N, params.ell_hi, delta, opts.eta, laws, {bc});
  RadialProfile out = run(prob, R, N, {bc}, tol, max_iter, opts, coarse ? &*coarse : nullptr);
  out.params = params;
  return out;
}

namespace {

struct LineFit {
  double slope = 0, intercept = 0, r2 = 0;
  std::size_t n = 0;
};

LineFit fit_window(const RadialProfile& p, double rho) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < p.r.size(); ++k) {
    const double r = p.r[k];
    if (r <= rho || r > 2.0 * rho || p.u[k] <= 0.0) continue;
    xs.push_back(std::log(r - rho));
    ys.push_back(std::log(p.u[k]));
  }
  LineFit f;
  f.n = xs.size();
  if (f.n < 2) return f;
  const double n = static_cast<double>(f.n);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < f.n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < f.n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace

RadialFit fit_growth_radial(const RadialProfile& profile, double expected) {
  const auto k = profile.free_boundary_node();
  if (!k || *k == 0 || *k + 1 >= profile.r.size()) {
    throw FitUnavailableError("no free boundary detected in the profile");
  }
  // The true radius lies in [r_k, r_{k+1}); refine it by golden-section
  // search on the fit residual.
  const double a0 = profile.r[*k], b0 = profile.r[*k + 1];
  auto cost = [&](double rho) { return 1.0 - fit_window(profile, rho).r2; };
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = a0, b = b0 - 1e-12 * b0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = cost(c), fd = cost(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = cost(d);
    }
  }
  const double rho = 0.5 * (a + b);
  const LineFit f = fit_window(profile, rho);
  if (f.n < 8) throw FitUnavailableError("fewer than 8 nodes in the fit window (rho, 2 rho]");
  RadialFit out;
  out.slope = f.slope;
  out.r2 = std::clamp(f.r2, 0.0, 1.0);
  out.rho = rho;
  out.constant = std::exp(f.intercept);
  out.points = f.n;
  out.deviation = expected != 0.0 ? f.slope / expected - 1.0 : 0.0;
  return out;
}

void write_profile_csv(const RadialProfile& profile, const std::string& path) {
  if (profile.has_v()) write_table_csv(path, {"r", "u", "v"}, {profile.r, profile.u, profile.v});
  else write_table_csv(path, {"r", "u"}, {profile.r, profile.u});
}

RadiusBracket dead_core_bracket(const SystemParams& params, double R, double bc_u, double bc_v) {
  const ExponentBundle e = system_exponents(params);
  const ConstantPair sup = system_constants_with(params, params.ell_hi, params.n);
  const ConstantPair sub = system_constants_with(params, params.ell_lo, 1);
  auto radius = [&](double bc, double c, double ex) { return R - std::pow(bc / c, 1.0 / ex); };
  RadiusBracket b;
  b.lower = std::clamp(std::min(radius(bc_u, sup.A, e.alpha_u), radius(bc_v, sup.B, e.beta_v)), 0.0, R);
  b.upper = std::clamp(std::max(radius(bc_u, sub.A, e.alpha_u), radius(bc_v, sub.B, e.beta_v)), 0.0, R);
  return b;
}

}  // namespace deadcore
