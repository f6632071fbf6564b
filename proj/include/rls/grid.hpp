#ifndef RLS_GRID_HPP
#define RLS_GRID_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "rls/types.hpp"

namespace rls {

// Uniform cubic grid, n points per axis, spacing h, centered on `origin`.
// Point (ix,iy,iz) sits at origin + h*(i - n/2) per axis; for even n the
// point x = origin is on the grid. Linear index runs z fastest:
//   idx = (ix*n + iy)*n + iz.
struct GridSpec {
  int n = 16;
  double h = 0.5;
  Position3 origin = Position3::Zero();

  GridSpec() = default;
  GridSpec(int n_, double h_, Position3 origin_ = Position3::Zero())
      : n(n_), h(h_), origin(origin_) {
    if (n < 8) throw ValidationError("grid", "grid needs n >= 8 per axis");
    if (n % 2 != 0) throw ValidationError("grid", "grid size must be even");
    if (!(h > 0.0)) throw ValidationError("grid", "grid spacing must be > 0");
  }

  std::int64_t points() const {
    return static_cast<std::int64_t>(n) * n * n;
  }
  double extent() const { return n * h; }
  double axis_coord(int i) const { return (i - n / 2) * h; }
  Position3 point(int ix, int iy, int iz) const {
    return origin + Position3(axis_coord(ix), axis_coord(iy), axis_coord(iz));
  }
  std::int64_t index(int ix, int iy, int iz) const {
    return (static_cast<std::int64_t>(ix) * n + iy) * n + iz;
  }
  double cell_volume() const { return h * h * h; }
  // momentum spacing of the dual lattice
  double dq() const { return 2.0 * PI / (n * h); }

  bool operator==(const GridSpec& o) const {
    return n == o.n && h == o.h && origin == o.origin;
  }
};

// 4-component complex field sampled on a GridSpec. Storage is point-major,
// spinor-minor: data[4*idx + c].
class SpinorField {
 public:
  SpinorField() = default;
  explicit SpinorField(const GridSpec& g)
      : grid_(g), data_(Eigen::VectorXcd::Zero(4 * g.points())) {}

  const GridSpec& grid() const { return grid_; }
  Eigen::VectorXcd& data() { return data_; }
  const Eigen::VectorXcd& data() const { return data_; }

  Eigen::Map<Vector4c> spinor(std::int64_t idx) {
    return Eigen::Map<Vector4c>(data_.data() + 4 * idx);
  }
  Eigen::Map<const Vector4c> spinor(std::int64_t idx) const {
    return Eigen::Map<const Vector4c>(data_.data() + 4 * idx);
  }

  // L2 norm with the h^3 quadrature weight
  double norm() const {
    return data_.norm() * std::sqrt(grid_.cell_volume());
  }

  bool all_finite() const { return data_.allFinite(); }

 private:
  GridSpec grid_;
  Eigen::VectorXcd data_;
};

// Applies fn(point, spinor_ref) over all grid points.
template <typename Fn>
void for_each_point(SpinorField& f, Fn&& fn) {
  const GridSpec& g = f.grid();
  const int n = g.n;
#pragma omp parallel for collapse(2)
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        auto s = f.spinor(g.index(ix, iy, iz));
        fn(g.point(ix, iy, iz), s);
      }
}

}  // namespace rls

#endif  // RLS_GRID_HPP
