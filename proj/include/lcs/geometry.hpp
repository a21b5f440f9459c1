#pragma once

#include "lcs/eigen_sym.hpp"
#include "lcs/types.hpp"

#include <span>

namespace lcs {

template <int Dim>
double polyline_length(std::span<const Vec<Dim>> points);

template <int Dim>
double point_segment_distance(const Vec<Dim>& p, const Vec<Dim>& a, const Vec<Dim>& b);

/// Distance from p to the nearest point of a polyline (a single vertex counts as a point).
template <int Dim>
double point_polyline_distance(const Vec<Dim>& p, std::span<const Vec<Dim>> line);

/// max over vertices of `from` of the distance to the polyline `to`.
template <int Dim>
double directed_hausdorff(std::span<const Vec<Dim>> from, std::span<const Vec<Dim>> to);

template <int Dim>
double hausdorff(std::span<const Vec<Dim>> a, std::span<const Vec<Dim>> b);

/// Inserts points so that no segment is longer than max_spacing.
template <int Dim>
Polyline<Dim> densify(std::span<const Vec<Dim>> points, double max_spacing);

/// Vertices of `points` lying within `radius` of `center`.
template <int Dim>
Polyline<Dim> clip_to_ball(std::span<const Vec<Dim>> points, const Vec<Dim>& center, double radius);

/// The maximal run of consecutive vertices around points[index] that stays
/// within `radius` of `center` (empty if points[index] itself lies outside).
template <int Dim>
Polyline<Dim> ball_section(std::span<const Vec<Dim>> points, std::size_t index, const Vec<Dim>& center,
                           double radius);

/// Vertices whose arclength distance from points[index] is at most `half_width`.
template <int Dim>
Polyline<Dim> arclength_window(std::span<const Vec<Dim>> points, std::size_t index, double half_width);

/// Mean and principal axes of a point cloud (second-moment matrix about the mean).
template <int Dim>
struct PrincipalAxes {
  Vec<Dim> mean;
  SymEigen<Dim> moments;  // ascending; column Dim-1 is the major axis
};

template <int Dim>
PrincipalAxes<Dim> principal_axes(std::span<const Vec<Dim>> points);

/// Angle in [0, pi/2] between two undirected lines.
template <int Dim>
double line_angle(const Vec<Dim>& u, const Vec<Dim>& v);

/// hausdorff(a, b) <= tol, with early exit.
template <int Dim>
bool within_hausdorff(std::span<const Vec<Dim>> a, std::span<const Vec<Dim>> b, double tol);

}  // namespace lcs
