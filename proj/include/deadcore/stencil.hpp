#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "deadcore/grid.hpp"
#include "deadcore/operators.hpp"

namespace deadcore {

/// Linear finite-difference rules at one interior node. Slot order:
/// centre, e, w, n, s, ne, nw, se, sw. A derivative is
/// sum_k w[k] * u[node[k]] + c, with node[k] = -1 for unused slots.
struct LocalStencil {
  static constexpr int kSlots = 9;
  std::array<std::int64_t, kSlots> node{};
  std::array<double, kSlots> wx{}, wy{}, wxx{}, wyy{}, wxy{};
  double cx = 0.0, cy = 0.0, cxx = 0.0, cyy = 0.0, cxy = 0.0;
};

struct LocalDerivs {
  double ux = 0.0;
  double uy = 0.0;
  Sym2 H;
};

enum class StencilMode { central, boundary_fitted };

/// Stencils for every interior node of a grid, in lexicographic order.
///
/// central: plain 9-point central differences (all neighbours read from the
/// field, exterior nodes included).
/// boundary_fitted: on disks, axis arms that leave the domain are shortened
/// to the boundary crossing and the trace value there becomes a constant;
/// the mixed derivative switches to the one-sided quadrant facing the centre
/// when a diagonal neighbour lies outside. On boxes both modes coincide.
class StencilSet {
 public:
  StencilSet(GridPtr grid, StencilMode mode, const BoundaryTrace* bc = nullptr);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  StencilMode mode() const { return mode_; }
  std::size_t size() const { return nodes_.size(); }
  /// Flat grid index of interior node number id.
  std::size_t node(std::size_t id) const { return nodes_[id]; }
  const std::vector<std::size_t>& nodes() const { return nodes_; }
  /// Interior number of a flat grid index, -1 if not interior.
  std::int64_t id_of(std::size_t flat) const { return id_of_[flat]; }
  const LocalStencil& at(std::size_t id) const { return stencils_[id]; }
  double x(std::size_t id) const { return xs_[id]; }
  double y(std::size_t id) const { return ys_[id]; }

  LocalDerivs eval(std::size_t id, const double* u) const;

  /// Writes trace values into every non-interior node of u.
  void fill_boundary(std::vector<double>& u, const BoundaryTrace& bc) const;

 private:
  GridPtr grid_;
  StencilMode mode_;
  std::vector<std::size_t> nodes_;
  std::vector<std::int64_t> id_of_;
  std::vector<LocalStencil> stencils_;
  std::vector<double> xs_, ys_;
};

/// Point of the domain boundary used for a non-interior node: the node itself
/// on boxes, its radial projection on disks.
std::array<double, 2> boundary_point(const Grid& g, int i, int j);

}  // namespace deadcore
