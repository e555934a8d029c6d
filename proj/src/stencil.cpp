#include "deadcore/stencil.hpp"

#include <algorithm>
#include <cmath>

#include "deadcore/errors.hpp"

namespace deadcore {

namespace {

enum Slot { C = 0, E, W, Nn, S, NE, NW, SE, SW };

// One axis with neighbours at +a h and -b h (a, b in (0, 1]).
struct AxisRule {
  double w0, wp, wm;     // first derivative
  double d0, dp, dm;     // second derivative
};

AxisRule axis_rule(double a, double b, double h) {
  AxisRule r{};
  const double den1 = a * b * (a + b) * h;
  r.wp = b * b / den1;
  r.wm = -a * a / den1;
  r.w0 = -(b * b - a * a) / den1;
  const double den2 = a * b * (a + b) * h * h;
  r.dp = 2.0 * b / den2;
  r.dm = 2.0 * a / den2;
  r.d0 = -2.0 * (a + b) / den2;
  return r;
}

}  // namespace

std::array<double, 2> boundary_point(const Grid& g, int i, int j) {
  const double x = g.x(i), y = g.y(j);
  if (g.shape() == Shape::box) return {x, y};
  const double r = std::hypot(x, y);
  if (r == 0.0) return {g.radius(), 0.0};
  return {g.radius() * x / r, g.radius() * y / r};
}

StencilSet::StencilSet(GridPtr grid, StencilMode mode, const BoundaryTrace* bc)
    : grid_(std::move(grid)), mode_(mode) {
  const Grid& g = *grid_;
  const bool fitted = mode == StencilMode::boundary_fitted && g.shape() == Shape::disk;
  if (fitted && (bc == nullptr || !bc->g)) throw ArgumentError("boundary-fitted stencil on a disk needs a trace");
  const int N = g.N();
  const double h = g.h();
  const double R = g.radius();
  id_of_.assign(g.size(), -1);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i)
      if (g.interior(i, j)) {
        id_of_[g.index(i, j)] = static_cast<std::int64_t>(nodes_.size());
        nodes_.push_back(g.index(i, j));
      }
  stencils_.resize(nodes_.size());
  xs_.resize(nodes_.size());
  ys_.resize(nodes_.size());

  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const int i = static_cast<int>(nodes_[id] % N);
    const int j = static_cast<int>(nodes_[id] / N);
    const double x = g.x(i), y = g.y(j);
    xs_[id] = x;
    ys_[id] = y;
    LocalStencil& s = stencils_[id];
    s.node.fill(-1);
    s.node[C] = static_cast<std::int64_t>(g.index(i, j));

    // Axis arms: e, w along x; n, s along y.
    struct Arm {
      int slot, di, dj;
    };
    const Arm arms[4] = {{E, 1, 0}, {W, -1, 0}, {Nn, 0, 1}, {S, 0, -1}};
    double theta[4] = {1.0, 1.0, 1.0, 1.0};
    double gval[4] = {0.0, 0.0, 0.0, 0.0};
    bool cut[4] = {false, false, false, false};
    for (int a = 0; a < 4; ++a) {
      const int ni = i + arms[a].di, nj = j + arms[a].dj;
      s.node[arms[a].slot] = static_cast<std::int64_t>(g.index(ni, nj));
      if (fitted && g.kind(ni, nj) == NodeKind::exterior) {
        double t;
        if (arms[a].dj == 0) {
          const double xc = std::sqrt(std::max(0.0, R * R - y * y));
          t = arms[a].di > 0 ? (xc - x) / h : (x + xc) / h;
        } else {
          const double yc = std::sqrt(std::max(0.0, R * R - x * x));
          t = arms[a].dj > 0 ? (yc - y) / h : (y + yc) / h;
        }
        t = std::clamp(t, 1e-6, 1.0);
        theta[a] = t;
        cut[a] = true;
        const double px = x + arms[a].di * t * h, py = y + arms[a].dj * t * h;
        const double rr = std::hypot(px, py);
        gval[a] = (*bc)(R * px / rr, R * py / rr);
        s.node[arms[a].slot] = -1;
      }
    }
    const AxisRule rx = axis_rule(theta[0], theta[1], h);
    const AxisRule ry = axis_rule(theta[2], theta[3], h);
    s.wx[C] = rx.w0;
    s.wxx[C] = rx.d0;
    s.wy[C] = ry.w0;
    s.wyy[C] = ry.d0;
    auto put_x = [&](int a, int slot, double w1, double w2) {
      if (cut[a]) {
        s.cx += w1 * gval[a];
        s.cxx += w2 * gval[a];
      } else {
        s.wx[slot] += w1;
        s.wxx[slot] += w2;
      }
    };
    auto put_y = [&](int a, int slot, double w1, double w2) {
      if (cut[a]) {
        s.cy += w1 * gval[a];
        s.cyy += w2 * gval[a];
      } else {
        s.wy[slot] += w1;
        s.wyy[slot] += w2;
      }
    };
    put_x(0, E, rx.wp, rx.dp);
    put_x(1, W, rx.wm, rx.dm);
    put_y(2, Nn, ry.wp, ry.dp);
    put_y(3, S, ry.wm, ry.dm);

    // Mixed derivative.
    const int di[4] = {1, -1, 1, -1}, dj[4] = {1, 1, -1, -1};
    const int dslot[4] = {NE, NW, SE, SW};
    bool diag_ok = true;
    for (int d = 0; d < 4; ++d) diag_ok = diag_ok && g.in_domain(i + di[d], j + dj[d]);
    if (!fitted || diag_ok) {
      const double w = 1.0 / (4.0 * h * h);
      for (int d = 0; d < 4; ++d) {
        s.node[dslot[d]] = static_cast<std::int64_t>(g.index(i + di[d], j + dj[d]));
        s.wxy[dslot[d]] = di[d] * dj[d] * w;
      }
    } else {
      const int sx = x > 0.0 ? -1 : 1;
      const int sy = y > 0.0 ? -1 : 1;
      int slot_d = 0;
      for (int d = 0; d < 4; ++d)
        if (di[d] == sx && dj[d] == sy) slot_d = dslot[d];
      const int slot_x = sx > 0 ? E : W;
      const int slot_y = sy > 0 ? Nn : S;
      if (cut[sx > 0 ? 0 : 1] || cut[sy > 0 ? 2 : 3] || !g.in_domain(i + sx, j + sy)) {
        throw StencilError("no inward quadrant available for the mixed derivative");
      }
      s.node[slot_d] = static_cast<std::int64_t>(g.index(i + sx, j + sy));
      const double w = sx * sy / (h * h);
      s.wxy[slot_d] += w;
      s.wxy[slot_x] -= w;
      s.wxy[slot_y] -= w;
      s.wxy[C] += w;
    }
  }
}

LocalDerivs StencilSet::eval(std::size_t id, const double* u) const {
  const LocalStencil& s = stencils_[id];
  LocalDerivs d;
  d.ux = s.cx;
  d.uy = s.cy;
  d.H.xx = s.cxx;
  d.H.yy = s.cyy;
  d.H.xy = s.cxy;
  for (int k = 0; k < LocalStencil::kSlots; ++k) {
    if (s.node[k] < 0) continue;
    const double v = u[s.node[k]];
    d.ux += s.wx[k] * v;
    d.uy += s.wy[k] * v;
    d.H.xx += s.wxx[k] * v;
    d.H.yy += s.wyy[k] * v;
    d.H.xy += s.wxy[k] * v;
  }
  return d;
}

void StencilSet::fill_boundary(std::vector<double>& u, const BoundaryTrace& bc) const {
  const Grid& g = *grid_;
  for (int j = 0; j < g.N(); ++j)
    for (int i = 0; i < g.N(); ++i) {
      if (g.interior(i, j)) continue;
      const auto p = boundary_point(g, i, j);
      u[g.index(i, j)] = bc(p[0], p[1]);
    }
}

}  // namespace deadcore
