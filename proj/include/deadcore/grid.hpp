#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace deadcore {

enum class Exec { sequential, parallel };

enum class NodeKind : std::uint8_t { interior = 0, boundary = 1, exterior = 2 };

enum class Shape { disk, box };

/// Uniform N x N node grid. Node (i, j) sits at (x0 + i h, y0 + j h); i runs
/// fastest in the flat index j*N + i.
class Grid {
 public:
  /// Disk of radius R centred at the origin inscribed in [-R, R]^2.
  static std::shared_ptr<const Grid> disk(int N, double R = 1.0);
  /// Disk of radius (N-1)h/2 with the given spacing kept bit-exact.
  static std::shared_ptr<const Grid> disk_with_spacing(int N, double h);
  /// Closed box [x0, x0+(N-1)h] x [y0, y0+(N-1)h]; the edge ring is boundary.
  static std::shared_ptr<const Grid> box(int N, double h, double x0, double y0);

  int N() const { return N_; }
  double h() const { return h_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  Shape shape() const { return shape_; }
  double radius() const { return radius_; }

  std::size_t size() const { return static_cast<std::size_t>(N_) * N_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * N_ + i; }
  double x(int i) const { return x0_ + i * h_; }
  double y(int j) const { return y0_ + j * h_; }
  bool in_grid(int i, int j) const { return i >= 0 && j >= 0 && i < N_ && j < N_; }

  NodeKind kind(int i, int j) const { return kinds_[index(i, j)]; }
  NodeKind kind(std::size_t k) const { return kinds_[k]; }
  bool interior(int i, int j) const { return kind(i, j) == NodeKind::interior; }
  /// Interior or boundary node.
  bool in_domain(int i, int j) const { return in_grid(i, j) && kind(i, j) != NodeKind::exterior; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::size_t interior_count() const { return n_interior_; }

  /// Physical point inside the closed domain (within a small tolerance).
  bool contains(double x, double y) const;

  bool same_as(const Grid& o) const;

 private:
  Grid() = default;
  void finish();

  int N_ = 0;
  double h_ = 0.0;
  double x0_ = 0.0;
  double y0_ = 0.0;
  Shape shape_ = Shape::box;
  double radius_ = 0.0;
  std::vector<NodeKind> kinds_;
  std::vector<std::uint8_t> mask_;
  std::size_t n_interior_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Scalar values on a grid, one per node including boundary and exterior nodes.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid, double fill = 0.0);
  Field(GridPtr grid, std::vector<double> values);

  static Field sample(GridPtr grid, const std::function<double(double, double)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  double& operator()(int i, int j) { return values_[grid_->index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_->index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  /// Largest value over domain (interior and boundary) nodes.
  double max_in_domain() const;
  double min_in_domain() const;
  /// Bilinear interpolation; throws DomainError outside the node box.
  double interpolate(double x, double y) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Throws ShapeError when the two fields live on different grids.
void require_same_grid(const Field& a, const Field& b);

/// Dirichlet datum on the domain boundary.
struct BoundaryTrace {
  std::function<double(double, double)> g;

  static BoundaryTrace constant(double c);
  double operator()(double x, double y) const { return g(x, y); }
};

}  // namespace deadcore
