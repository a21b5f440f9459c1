#pragma once

#include "lcs/integrator.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lcs {

struct AdvectOptions {
  bool refine = true;
  /// A segment is split (at t0) while its advected length exceeds
  /// refine_factor times the length of the input segment it came from.
  double refine_factor = 2.0;
  int max_depth = 10;
  int threads = 0;
};

template <int Dim>
struct AdvectedCurve {
  Polyline<Dim> initial;             // vertices at t0, including inserted midpoints
  Polyline<Dim> points;              // images at t1 (NaN where escaped)
  std::vector<std::uint8_t> escaped;
  bool saturated = false;            // some segment hit max_depth and still exceeded the bound
  std::size_t escaped_count() const;
};

/// Advects a polyline vertex by vertex from t0 to t1 with optional
/// midpoint refinement. Output ordering follows the input polyline.
template <int Dim>
AdvectedCurve<Dim> advect_curve(std::span<const Vec<Dim>> line, const VelocityField<Dim>& field, double t0,
                                double t1, const IntegratorParams& params, const AdvectOptions& options = {});

/// Advects a point cloud (no connectivity); escaped points come back NaN.
template <int Dim>
std::vector<Vec<Dim>> advect_points(std::span<const Vec<Dim>> points, const VelocityField<Dim>& field, double t0,
                                    double t1, const IntegratorParams& params, int threads = 0);

}  // namespace lcs
