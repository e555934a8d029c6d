#include "deadcore/gridsolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "deadcore/errors.hpp"
#include "deadcore/kernels.hpp"
#include "deadcore/newton.hpp"
#include "deadcore/reaction.hpp"
#include "deadcore/stencil.hpp"

namespace deadcore {

void SolveConfig::validate() const {
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");
  if (!(tol > 0.0)) throw ParameterError("tol must be > 0");
  if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw ParameterError("damping must lie in (0, 1]");
  if (pseudo_dt && !(*pseudo_dt > 0.0)) throw ParameterError("pseudo_dt must be > 0 or auto");
  if (!(eta > 0.0)) throw ParameterError("eta must be > 0");
  if (!(coarsest_h > 0.0)) throw ParameterError("coarsest_h must be > 0");
}

namespace {

struct Term {
  double c = 1.0;
  double alpha = 0.0;
  double mu = 0.0;
  int source = 0;
};

struct FieldLaw {
  OperatorSpec spec;
  double p = 0.0;
  std::vector<Term> terms;
  double eps = 0.0;
};

constexpr int kCols = LocalStencil::kSlots + 1;  // stencil slots plus one partner column

class GridProblem : public NonlinearProblem {
 public:
  GridProblem(GridPtr grid, std::vector<FieldLaw> laws, std::vector<BoundaryTrace> bc, double delta, double eta,
              bool nonneg, Exec exec)
      : grid_(std::move(grid)), laws_(std::move(laws)), bc_(std::move(bc)), delta_(delta), eta_(eta), exec_(exec) {
    nf_ = static_cast<int>(laws_.size());
    for (int f = 0; f < nf_; ++f) st_.emplace_back(grid_, StencilMode::boundary_fitted, &bc_[f]);
    const StencilSet& s0 = st_.front();
    const std::size_t m = s0.size();
    full_.resize(nf_);
    for (int f = 0; f < nf_; ++f) {
      full_[f].assign(grid_->size(), 0.0);
      st_[f].fill_boundary(full_[f], bc_[f]);
    }
    // Fill-reducing numbering: nested dissection over the node lattice,
    // fields interleaved per node.
    std::vector<char> active(grid_->size(), 0);
    for (std::size_t id = 0; id < m; ++id) active[s0.node(id)] = 1;
    const auto order = nested_dissection_order(grid_->N(), grid_->N(), active);
    pos_.assign(m, 0);
    for (std::size_t k = 0; k < order.size(); ++k) pos_[s0.id_of(order[k])] = k;

    weights_.resize(nf_);
    for (int f = 0; f < nf_; ++f) {
      weights_[f].resize(laws_[f].terms.size());
      for (std::size_t t = 0; t < laws_[f].terms.size(); ++t) {
        const Term& term = laws_[f].terms[t];
        auto& w = weights_[f][t];
        w.resize(m);
        for (std::size_t id = 0; id < m; ++id) {
          const double r = std::hypot(s0.x(id), s0.y(id));
          w[id] = term.c * (term.alpha == 0.0 ? 1.0 : std::pow(r, term.alpha));
        }
      }
    }
    if (nonneg) nonneg_.assign(size(), 1);
    val_.resize(m);
    jac_.resize(m);
    build_pattern();
  }

  std::size_t size() const override { return st_.front().size() * nf_; }
  const std::vector<char>& nonnegative() const override { return nonneg_; }

  std::size_t row(std::size_t id, int f) const { return pos_[id] * nf_ + f; }

  void set_eta(double eta) { eta_ = eta; }
  double eta() const { return eta_; }

  void scatter(const Eigen::VectorXd& x) {
    const StencilSet& s0 = st_.front();
    for (std::size_t id = 0; id < s0.size(); ++id)
      for (int f = 0; f < nf_; ++f) full_[f][s0.node(id)] = x[row(id, f)];
  }

  void gather_initial(const std::vector<Field>& init, Eigen::VectorXd& x) const {
    const StencilSet& s0 = st_.front();
    x.resize(static_cast<Eigen::Index>(size()));
    for (std::size_t id = 0; id < s0.size(); ++id)
      for (int f = 0; f < nf_; ++f) x[row(id, f)] = init[f][s0.node(id)];
  }

  std::vector<Field> fields(const Eigen::VectorXd& x) {
    scatter(x);
    std::vector<Field> out;
    for (int f = 0; f < nf_; ++f) out.emplace_back(grid_, full_[f]);
    return out;
  }

  double reaction(int f, std::size_t id) const {
    const std::size_t node = st_.front().node(id);
    double s = laws_[f].eps;
    const auto& terms = laws_[f].terms;
    for (std::size_t t = 0; t < terms.size(); ++t)
      s += weights_[f][t][id] * reaction_power(full_[terms[t].source][node], terms[t].mu, eta_);
    return s;
  }

  double pseudo_time_sign() const override { return 1.0; }

  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& F) override {
    scatter(x);
    F.resize(static_cast<Eigen::Index>(size()));
    const std::size_t m = st_.front().size();
    for (int f = 0; f < nf_; ++f) {
      degenerate_operator(st_[f], laws_[f].spec, laws_[f].p, delta_, full_[f].data(), val_.data(), nullptr, exec_);
      for (std::size_t id = 0; id < m; ++id) F[row(id, f)] = val_[id] - reaction(f, id);
    }
  }

  void jacobian(const Eigen::VectorXd& x, SpMat& J) override {
    scatter(x);
    if (J.nonZeros() != pattern_.nonZeros() || J.rows() != pattern_.rows()) J = pattern_;
    double* vals = J.valuePtr();
    std::fill(vals, vals + J.nonZeros(), 0.0);
    const StencilSet& s0 = st_.front();
    const std::size_t m = s0.size();
    for (int f = 0; f < nf_; ++f) {
      degenerate_operator(st_[f], laws_[f].spec, laws_[f].p, delta_, full_[f].data(), val_.data(), jac_.data(),
                          exec_);
      const auto& terms = laws_[f].terms;
      for (std::size_t id = 0; id < m; ++id) {
        const std::int64_t* slot = &slot_pos_[(id * nf_ + f) * kCols];
        for (int k = 0; k < LocalStencil::kSlots; ++k)
          if (slot[k] >= 0) vals[slot[k]] += jac_[id][k];
        const std::size_t node = s0.node(id);
        for (std::size_t t = 0; t < terms.size(); ++t) {
          const double d =
              weights_[f][t][id] * reaction_power_derivative(full_[terms[t].source][node], terms[t].mu, eta_);
          const std::int64_t p = terms[t].source == f ? slot[0] : slot[LocalStencil::kSlots];
          vals[p] -= d;
        }
      }
    }
  }

 private:
  void build_pattern() {
    const StencilSet& s0 = st_.front();
    const std::size_t m = s0.size();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(size() * kCols);
    auto col_of = [&](std::size_t id, int k, int f) -> std::int64_t {
      const std::int64_t node = s0.at(id).node[k];
      if (node < 0) return -1;
      const std::int64_t nid = s0.id_of(static_cast<std::size_t>(node));
      if (nid < 0) return -1;
      return static_cast<std::int64_t>(row(static_cast<std::size_t>(nid), f));
    };
    std::vector<int> partner(nf_, -1);
    for (int f = 0; f < nf_; ++f)
      for (const auto& t : laws_[f].terms)
        if (t.source != f) partner[f] = t.source;
    for (std::size_t id = 0; id < m; ++id)
      for (int f = 0; f < nf_; ++f) {
        const auto r = static_cast<int>(row(id, f));
        for (int k = 0; k < LocalStencil::kSlots; ++k) {
          const auto c = col_of(id, k, f);
          if (c >= 0) trip.emplace_back(r, static_cast<int>(c), 1.0);
        }
        if (partner[f] >= 0) trip.emplace_back(r, static_cast<int>(row(id, partner[f])), 1.0);
      }
    const auto n = static_cast<Eigen::Index>(size());
    pattern_.resize(n, n);
    pattern_.setFromTriplets(trip.begin(), trip.end());
    pattern_.makeCompressed();
    auto locate = [&](std::int64_t r, std::int64_t c) -> std::int64_t {
      const int* inner = pattern_.innerIndexPtr();
      const int* outer = pattern_.outerIndexPtr();
      const int* b = inner + outer[c];
      const int* e = inner + outer[c + 1];
      const int* it = std::lower_bound(b, e, static_cast<int>(r));
      if (it == e || *it != r) throw Error("jacobian pattern lookup failed");
      return it - inner;
    };
    slot_pos_.assign(size() * kCols, -1);
    for (std::size_t id = 0; id < m; ++id)
      for (int f = 0; f < nf_; ++f) {
        const auto r = static_cast<std::int64_t>(row(id, f));
        std::int64_t* slot = &slot_pos_[(id * nf_ + f) * kCols];
        for (int k = 0; k < LocalStencil::kSlots; ++k) {
          const auto c = col_of(id, k, f);
          if (c >= 0) slot[k] = locate(r, c);
        }
        if (partner[f] >= 0) slot[LocalStencil::kSlots] = locate(r, static_cast<std::int64_t>(row(id, partner[f])));
      }
  }

  GridPtr grid_;
  std::vector<FieldLaw> laws_;
  std::vector<BoundaryTrace> bc_;
  double delta_, eta_;
  Exec exec_;
  int nf_ = 1;
  std::vector<StencilSet> st_;
  std::vector<std::vector<double>> full_;
  std::vector<std::size_t> pos_;
  std::vector<std::vector<std::vector<double>>> weights_;
  std::vector<char> nonneg_;
  std::vector<double> val_;
  std::vector<JacRow> jac_;
  SpMat pattern_;
  std::vector<std::int64_t> slot_pos_;
};

Field prolong(const Field& coarse, const GridPtr& fine) {
  Field out(fine, 0.0);
  const Grid& g = *fine;
  for (int j = 0; j < g.N(); ++j)
    for (int i = 0; i < g.N(); ++i) out(i, j) = coarse.interpolate(g.x(i), g.y(j));
  return out;
}

Field trace_field(const GridPtr& grid, const BoundaryTrace& bc) {
  Field out(grid, 0.0);
  const Grid& g = *grid;
  for (int j = 0; j < g.N(); ++j)
    for (int i = 0; i < g.N(); ++i) {
      const auto p = boundary_point(g, i, j);
      out(i, j) = bc(p[0], p[1]);
    }
  return out;
}

// Solves on one grid from the given start, with a homotopy in eta when the
// start is not a warm one.
std::vector<Field> solve_level(const GridPtr& grid, const std::vector<FieldLaw>& laws,
                               const std::vector<BoundaryTrace>& bc, const SolveConfig& cfg, bool nonneg,
                               const std::vector<Field>& start, bool cold, SolveDiagnostics& diag) {
  const double delta = cfg.delta > 0.0 ? cfg.delta : grid->h();
  GridProblem prob(grid, laws, bc, delta, cfg.eta, nonneg, cfg.exec);
  Eigen::VectorXd x;
  prob.gather_initial(start, x);
  NewtonOptions no;
  no.tol = cfg.tol;
  no.max_iter = cfg.max_iter;
  no.initial_step = cfg.damping;
  no.reuse_factorization = true;
  if (cfg.pseudo_dt) no.pseudo_dt = *cfg.pseudo_dt;
  // "auto": plain Newton first, then pseudo-time from 0.1 / ell_hi if it stalls.
  double ell = 0.0;
  for (const auto& law : laws) ell = std::max(ell, law.spec.ell_hi);
  const double auto_dt = 0.1 / ell;
  int iters = 0;
  auto record = [&](const NewtonResult& r) {
    iters += r.iterations;
    diag.residual_history.insert(diag.residual_history.end(), r.history.begin(), r.history.end());
    diag.residual = r.residual;
  };
  bool stepped = cfg.pseudo_dt.has_value();
  auto run = [&]() {
    if (stepped) {
      NewtonOptions pt = no;
      if (!cfg.pseudo_dt) pt.pseudo_dt = auto_dt;
      record(newton_solve(prob, x, pt));
      return;
    }
    const Eigen::VectorXd x0 = x;
    try {
      record(newton_solve(prob, x, no));
    } catch (const InstabilityError&) {
      throw;
    } catch (const ConvergenceError& e) {
      iters += e.iterations();
      x = x0;
      stepped = true;
      NewtonOptions pt = no;
      pt.pseudo_dt = auto_dt;
      record(newton_solve(prob, x, pt));
    }
  };
  if (cold) {
    double scale = 1.0;
    for (const auto& s : start) scale = std::max(scale, std::abs(s.max_in_domain()));
    const double target = prob.eta();
    for (double eta = 1e-2 * scale; eta > target; eta *= 1e-2) {
      prob.set_eta(eta);
      run();
    }
    prob.set_eta(target);
  }
  run();
  diag.iterations += iters;
  diag.level_iterations.push_back(iters);
  diag.level_h.push_back(grid->h());
  return prob.fields(x);
}

std::vector<GridPtr> level_grids(const GridPtr& fine, double coarsest_h) {
  std::vector<GridPtr> levels = {fine};
  if (fine->shape() != Shape::disk) return levels;
  while (true) {
    const GridPtr& g = levels.back();
    const int N = g->N();
    if ((N - 1) % 2 != 0 || 2.0 * g->h() > coarsest_h * (1.0 + 1e-9) || (N - 1) / 2 + 1 < 9) break;
    levels.push_back(Grid::disk((N - 1) / 2 + 1, g->radius()));
  }
  std::reverse(levels.begin(), levels.end());
  return levels;
}

std::vector<Field> solve_nested(const GridPtr& grid, const std::vector<FieldLaw>& laws,
                                const std::vector<BoundaryTrace>& bc, const SolveConfig& cfg, bool nonneg,
                                const std::vector<Field>* initial, SolveDiagnostics& diag) {
  if (initial) {
    for (const auto& f : *initial) require_same_grid(f, Field(grid));
    return solve_level(grid, laws, bc, cfg, nonneg, *initial, true, diag);
  }
  const auto levels = level_grids(grid, cfg.coarsest_h);
  std::vector<Field> cur;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    std::vector<Field> start;
    for (std::size_t f = 0; f < bc.size(); ++f)
      start.push_back(l == 0 ? trace_field(levels[l], bc[f]) : prolong(cur[f], levels[l]));
    cur = solve_level(levels[l], laws, bc, cfg, nonneg, start, l == 0, diag);
  }
  return cur;
}

void require_nonnegative_trace(const GridPtr& grid, const BoundaryTrace& bc) {
  const Field t = trace_field(grid, bc);
  for (std::size_t k = 0; k < t.values().size(); ++k)
    if (!grid->interior(static_cast<int>(k % grid->N()), static_cast<int>(k / grid->N())) && t[k] < 0.0) {
      throw ArgumentError("boundary data must be nonnegative");
    }
}

void require_singular_delta(double p, const SolveConfig& cfg, const Grid& g) {
  if (p < 0.0 && cfg.delta > 0.0 && cfg.delta < g.h()) {
    throw ParameterError("singular degeneracy law needs delta >= h");
  }
}

}  // namespace

namespace {

std::vector<FieldLaw> system_laws(const SystemParams& params, const SpecPair& specs, const TracePair& bc,
                                  const SolveConfig& cfg, const GridPtr& grid) {
  params.validate();
  cfg.validate();
  specs.first.validate();
  specs.second.validate();
  if (!grid) throw ArgumentError("solver needs a grid");
  if (!bc.first.g || !bc.second.g) throw ArgumentError("boundary traces must be set");
  require_nonnegative_trace(grid, bc.first);
  require_nonnegative_trace(grid, bc.second);
  require_singular_delta(params.p, cfg, *grid);
  require_singular_delta(params.q, cfg, *grid);
  return {
      {specs.first, params.p, {{1.0, 0.0, params.lambda1, 1}}, cfg.epsilon},
      {specs.second, params.q, {{1.0, 0.0, params.lambda2, 0}}, cfg.epsilon},
  };
}

void set_epsilon(std::vector<FieldLaw>& laws, double eps) {
  for (auto& l : laws) l.eps = eps;
}

}  // namespace

SystemSolution solve_penalized(const SystemParams& params, const SpecPair& specs, const TracePair& bc,
                               const SolveConfig& cfg, const GridPtr& grid, const std::pair<Field, Field>* initial) {
  const auto laws = system_laws(params, specs, bc, cfg, grid);
  std::vector<BoundaryTrace> traces = {bc.first, bc.second};
  SystemSolution out;
  std::vector<Field> init;
  if (initial) init = {initial->first, initial->second};
  auto fields = solve_nested(grid, laws, traces, cfg, cfg.epsilon == 0.0, initial ? &init : nullptr, out.diagnostics);
  out.u = std::move(fields[0]);
  out.v = std::move(fields[1]);
  return out;
}

DeadcoreSolution solve_deadcore(const SystemParams& params, const SpecPair& specs, const TracePair& bc,
                                const SolveConfig& cfg, const GridPtr& grid, const std::vector<double>& eps_schedule) {
  if (eps_schedule.empty()) throw ArgumentError("epsilon schedule is empty");
  for (std::size_t k = 1; k < eps_schedule.size(); ++k)
    if (!(eps_schedule[k] < eps_schedule[k - 1])) throw ArgumentError("epsilon schedule must strictly decrease");
  if (!(eps_schedule.back() >= 0.0)) throw ArgumentError("epsilon schedule must end at a value >= 0");
  auto laws = system_laws(params, specs, bc, cfg, grid);
  std::vector<BoundaryTrace> traces = {bc.first, bc.second};
  const std::size_t ns = eps_schedule.size();
  std::vector<SolveDiagnostics> diag(ns);
  std::vector<std::vector<Field>> stage(ns);
  // Whole schedule per level: warm starts along eps on the coarsest grid,
  // then each stage is prolonged and corrected on the finer grids.
  const auto levels = level_grids(grid, cfg.coarsest_h);
  for (std::size_t l = 0; l < levels.size(); ++l) {
    for (std::size_t k = 0; k < ns; ++k) {
      set_epsilon(laws, eps_schedule[k]);
      std::vector<Field> start;
      for (int f = 0; f < 2; ++f) {
        if (l > 0) start.push_back(prolong(stage[k][f], levels[l]));
        else if (k > 0) start.push_back(stage[k - 1][f]);
        else start.push_back(trace_field(levels[l], traces[f]));
      }
      stage[k] = solve_level(levels[l], laws, traces, cfg, eps_schedule[k] == 0.0, start, l == 0, diag[k]);
    }
  }
  DeadcoreSolution out;
  for (std::size_t k = 0; k < ns; ++k) {
    out.stages.push_back({eps_schedule[k], std::move(stage[k][0]), std::move(stage[k][1]), std::move(diag[k])});
  }
  for (std::size_t k = 1; k < out.stages.size(); ++k) {
    const auto& a = out.stages[k - 1];
    const auto& b = out.stages[k];
    for (std::size_t n = 0; n < grid->size(); ++n) {
      if (grid->kind(n) == NodeKind::exterior) continue;
      out.monotonicity_violation = std::max({out.monotonicity_violation, a.u[n] - b.u[n], a.v[n] - b.v[n]});
    }
  }
  if (out.monotonicity_violation > cfg.tol) {
    std::ostringstream os;
    os << "stage solutions are not monotone in epsilon (violation " << out.monotonicity_violation << ")";
    throw ConvergenceError(os.str(), out.monotonicity_violation, static_cast<int>(out.stages.size()));
  }
  out.u = out.stages.back().u;
  out.v = out.stages.back().v;
  return out;
}

HenonSolution solve_henon_grid(double p, const OperatorSpec& spec, const std::vector<HenonTermSpec>& terms,
                               const BoundaryTrace& bc, const SolveConfig& cfg, const GridPtr& grid,
                               const Field* initial) {
  cfg.validate();
  spec.validate();
  if (!grid) throw ArgumentError("solver needs a grid");
  if (!bc.g) throw ArgumentError("boundary trace must be set");
  if (!(p >= 0.0)) throw ParameterError("henon degeneracy exponent must satisfy p >= 0");
  for (const auto& t : terms) {
    if (!(t.c >= 0.0) || !(t.alpha >= 0.0) || !(t.mu >= 0.0) || !(t.mu <= 1.0 + p)) {
      throw ParameterError("henon terms need c >= 0, alpha >= 0 and mu in [0, 1+p]");
    }
  }
  require_nonnegative_trace(grid, bc);
  std::vector<Term> ts;
  for (const auto& t : terms) ts.push_back({t.c, t.alpha, t.mu, 0});
  std::vector<FieldLaw> laws = {{spec, p, ts, cfg.epsilon}};
  HenonSolution out;
  std::vector<Field> init;
  if (initial) init = {*initial};
  auto fields = solve_nested(grid, laws, {bc}, cfg, cfg.epsilon == 0.0, initial ? &init : nullptr, out.diagnostics);
  out.u = std::move(fields[0]);
  return out;
}

bool check_comparison(const Field& a, const Field& b, double tol) {
  require_same_grid(a, b);
  const Grid& g = a.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.kind(k) == NodeKind::exterior) continue;
    if (a[k] > b[k] + tol) return false;
  }
  return true;
}

double apriori_bound_check(const Field& u, double bc_sup, double rhs_sup, double p, double diam, double c_abp) {
  double m = 0.0;
  const Grid& g = u.grid();
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.kind(k) != NodeKind::exterior) m = std::max(m, std::abs(u[k]));
  return bc_sup + c_abp * diam * diam * std::pow(std::max(rhs_sup, 0.0), 1.0 / (1.0 + p)) - m;
}

}  // namespace deadcore
