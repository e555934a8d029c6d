#include "deadcore/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deadcore/errors.hpp"

namespace deadcore {

std::shared_ptr<const Grid> Grid::disk(int N, double R) {
  if (N < 5) throw ArgumentError("grid needs N >= 5");
  if (!(R > 0.0)) throw ArgumentError("disk radius must be positive");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->N_ = N;
  g->h_ = 2.0 * R / (N - 1);
  g->x0_ = -R;
  g->y0_ = -R;
  g->shape_ = Shape::disk;
  g->radius_ = R;
  g->finish();
  return g;
}

std::shared_ptr<const Grid> Grid::disk_with_spacing(int N, double h) {
  if (N < 5) throw ArgumentError("grid needs N >= 5");
  if (!(h > 0.0)) throw ArgumentError("grid spacing must be positive");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->N_ = N;
  g->h_ = h;
  g->radius_ = 0.5 * (N - 1) * h;
  g->x0_ = -g->radius_;
  g->y0_ = -g->radius_;
  g->shape_ = Shape::disk;
  g->finish();
  return g;
}

std::shared_ptr<const Grid> Grid::box(int N, double h, double x0, double y0) {
  if (N < 5) throw ArgumentError("grid needs N >= 5");
  if (!(h > 0.0)) throw ArgumentError("grid spacing must be positive");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->N_ = N;
  g->h_ = h;
  g->x0_ = x0;
  g->y0_ = y0;
  g->shape_ = Shape::box;
  g->radius_ = 0.5 * (N - 1) * h;
  g->finish();
  return g;
}

void Grid::finish() {
  kinds_.assign(size(), NodeKind::exterior);
  mask_.assign(size(), 0);
  n_interior_ = 0;
  const double cut = radius_ - 1e-3 * h_;
  for (int j = 0; j < N_; ++j) {
    for (int i = 0; i < N_; ++i) {
      NodeKind k;
      if (shape_ == Shape::box) {
        k = (i == 0 || j == 0 || i == N_ - 1 || j == N_ - 1) ? NodeKind::boundary : NodeKind::interior;
      } else {
        const double r = std::hypot(x(i), y(j));
        if (r < cut) k = NodeKind::interior;
        else if (r <= radius_ + 1e-12 * h_) k = NodeKind::boundary;
        else k = NodeKind::exterior;
      }
      kinds_[index(i, j)] = k;
      if (k == NodeKind::interior) {
        mask_[index(i, j)] = 1;
        ++n_interior_;
      }
    }
  }
}

bool Grid::contains(double px, double py) const {
  const double eps = 1e-12 * std::max(1.0, h_ * N_);
  if (shape_ == Shape::disk) return std::hypot(px, py) <= radius_ + eps;
  const double x1 = x0_ + (N_ - 1) * h_, y1 = y0_ + (N_ - 1) * h_;
  return px >= x0_ - eps && px <= x1 + eps && py >= y0_ - eps && py <= y1 + eps;
}

bool Grid::same_as(const Grid& o) const {
  return this == &o || (N_ == o.N_ && h_ == o.h_ && x0_ == o.x0_ && y0_ == o.y0_ && shape_ == o.shape_ &&
                        radius_ == o.radius_);
}

Field::Field(GridPtr grid, double fill) : grid_(std::move(grid)) {
  if (!grid_) throw ArgumentError("field needs a grid");
  values_.assign(grid_->size(), fill);
}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ArgumentError("field needs a grid");
  if (values_.size() != grid_->size()) throw ShapeError("value count does not match grid size");
}

Field Field::sample(GridPtr grid, const std::function<double(double, double)>& f) {
  Field out(grid);
  const Grid& g = *grid;
  for (int j = 0; j < g.N(); ++j)
    for (int i = 0; i < g.N(); ++i) out(i, j) = f(g.x(i), g.y(j));
  return out;
}

double Field::max_in_domain() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (grid_->kind(k) != NodeKind::exterior) m = std::max(m, values_[k]);
  return m;
}

double Field::min_in_domain() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (grid_->kind(k) != NodeKind::exterior) m = std::min(m, values_[k]);
  return m;
}

double Field::interpolate(double x, double y) const {
  const Grid& g = *grid_;
  const double s = (x - g.x0()) / g.h();
  const double t = (y - g.y0()) / g.h();
  const double top = g.N() - 1;
  const double slack = 1e-9;
  if (s < -slack || t < -slack || s > top + slack || t > top + slack) {
    throw DomainError("interpolation point outside the grid");
  }
  const double sc = std::clamp(s, 0.0, top), tc = std::clamp(t, 0.0, top);
  int i = std::min(static_cast<int>(std::floor(sc)), g.N() - 2);
  int j = std::min(static_cast<int>(std::floor(tc)), g.N() - 2);
  const double a = sc - i, b = tc - j;
  const Field& f = *this;
  return (1 - a) * (1 - b) * f(i, j) + a * (1 - b) * f(i + 1, j) + (1 - a) * b * f(i, j + 1) +
         a * b * f(i + 1, j + 1);
}

void require_same_grid(const Field& a, const Field& b) {
  if (!a.grid_ptr() || !b.grid_ptr() || !a.grid().same_as(b.grid())) {
    throw ShapeError("fields live on different grids");
  }
}

BoundaryTrace BoundaryTrace::constant(double c) {
  return BoundaryTrace{[c](double, double) { return c; }};
}

}  // namespace deadcore
