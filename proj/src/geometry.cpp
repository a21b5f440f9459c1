#include "lcs/geometry.hpp"

#include "lcs/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcs {

template <int Dim>
double polyline_length(std::span<const Vec<Dim>> points) {
  double length = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) length += (points[i] - points[i - 1]).norm();
  return length;
}

template <int Dim>
double point_segment_distance(const Vec<Dim>& p, const Vec<Dim>& a, const Vec<Dim>& b) {
  const Vec<Dim> ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

template <int Dim>
double point_polyline_distance(const Vec<Dim>& p, std::span<const Vec<Dim>> line) {
  if (line.empty()) return std::numeric_limits<double>::infinity();
  if (line.size() == 1) return (p - line[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < line.size(); ++i)
    best = std::min(best, point_segment_distance<Dim>(p, line[i - 1], line[i]));
  return best;
}

template <int Dim>
double directed_hausdorff(std::span<const Vec<Dim>> from, std::span<const Vec<Dim>> to) {
  double worst = 0.0;
  for (const auto& p : from) worst = std::max(worst, point_polyline_distance<Dim>(p, to));
  return worst;
}

template <int Dim>
double hausdorff(std::span<const Vec<Dim>> a, std::span<const Vec<Dim>> b) {
  return std::max(directed_hausdorff<Dim>(a, b), directed_hausdorff<Dim>(b, a));
}

template <int Dim>
Polyline<Dim> densify(std::span<const Vec<Dim>> points, double max_spacing) {
  if (!(max_spacing > 0)) throw Error(ErrorKind::InvalidArgument, "densify spacing must be positive");
  Polyline<Dim> out;
  if (points.empty()) return out;
  out.push_back(points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const Vec<Dim> d = points[i] - points[i - 1];
    const auto pieces = static_cast<int>(std::ceil(d.norm() / max_spacing));
    for (int k = 1; k < pieces; ++k) out.push_back(points[i - 1] + (double(k) / pieces) * d);
    out.push_back(points[i]);
  }
  return out;
}

template <int Dim>
Polyline<Dim> clip_to_ball(std::span<const Vec<Dim>> points, const Vec<Dim>& center, double radius) {
  Polyline<Dim> out;
  for (const auto& p : points)
    if ((p - center).norm() <= radius) out.push_back(p);
  return out;
}

template <int Dim>
Polyline<Dim> ball_section(std::span<const Vec<Dim>> points, std::size_t index, const Vec<Dim>& center,
                           double radius) {
  if (index >= points.size() || (points[index] - center).norm() > radius) return {};
  std::size_t lo = index, hi = index;
  while (lo > 0 && (points[lo - 1] - center).norm() <= radius) --lo;
  while (hi + 1 < points.size() && (points[hi + 1] - center).norm() <= radius) ++hi;
  return Polyline<Dim>(points.begin() + lo, points.begin() + hi + 1);
}

template <int Dim>
Polyline<Dim> arclength_window(std::span<const Vec<Dim>> points, std::size_t index, double half_width) {
  if (index >= points.size()) return {};
  std::size_t lo = index, hi = index;
  double s = 0.0;
  while (lo > 0 && s + (points[lo] - points[lo - 1]).norm() <= half_width) {
    s += (points[lo] - points[lo - 1]).norm();
    --lo;
  }
  s = 0.0;
  while (hi + 1 < points.size() && s + (points[hi + 1] - points[hi]).norm() <= half_width) {
    s += (points[hi + 1] - points[hi]).norm();
    ++hi;
  }
  return Polyline<Dim>(points.begin() + lo, points.begin() + hi + 1);
}

template <int Dim>
PrincipalAxes<Dim> principal_axes(std::span<const Vec<Dim>> points) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "principal axes of an empty point set");
  PrincipalAxes<Dim> out;
  out.mean = Vec<Dim>::Zero();
  for (const auto& p : points) out.mean += p;
  out.mean /= double(points.size());
  Mat<Dim> M = Mat<Dim>::Zero();
  for (const auto& p : points) {
    const Vec<Dim> d = p - out.mean;
    M += d * d.transpose();
  }
  M /= double(points.size());
  out.moments = eig_sym<Dim>(M, 0.0);
  return out;
}

template <int Dim>
double line_angle(const Vec<Dim>& u, const Vec<Dim>& v) {
  const double c = std::abs(u.normalized().dot(v.normalized()));
  return std::acos(std::min(1.0, c));
}

template <int Dim>
bool within_hausdorff(std::span<const Vec<Dim>> a, std::span<const Vec<Dim>> b, double tol) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  auto bbox_gap = [](std::span<const Vec<Dim>> p, std::span<const Vec<Dim>> q) {
    Vec<Dim> plo = p[0], phi = p[0], qlo = q[0], qhi = q[0];
    for (const auto& x : p) {
      plo = plo.cwiseMin(x);
      phi = phi.cwiseMax(x);
    }
    for (const auto& x : q) {
      qlo = qlo.cwiseMin(x);
      qhi = qhi.cwiseMax(x);
    }
    return std::max((plo - qlo).cwiseAbs().maxCoeff(), (phi - qhi).cwiseAbs().maxCoeff());
  };
  // Bounding boxes of Hausdorff-close sets differ by at most tol per side.
  if (bbox_gap(a, b) > tol) return false;
  for (const auto& p : a)
    if (point_polyline_distance<Dim>(p, b) > tol) return false;
  for (const auto& p : b)
    if (point_polyline_distance<Dim>(p, a) > tol) return false;
  return true;
}

#define LCS_INSTANTIATE(D)                                                                         \
  template double polyline_length<D>(std::span<const Vec<D>>);                                     \
  template double point_segment_distance<D>(const Vec<D>&, const Vec<D>&, const Vec<D>&);          \
  template double point_polyline_distance<D>(const Vec<D>&, std::span<const Vec<D>>);              \
  template double directed_hausdorff<D>(std::span<const Vec<D>>, std::span<const Vec<D>>);         \
  template double hausdorff<D>(std::span<const Vec<D>>, std::span<const Vec<D>>);                  \
  template Polyline<D> densify<D>(std::span<const Vec<D>>, double);                                \
  template Polyline<D> clip_to_ball<D>(std::span<const Vec<D>>, const Vec<D>&, double);            \
  template Polyline<D> ball_section<D>(std::span<const Vec<D>>, std::size_t, const Vec<D>&, double); \
  template Polyline<D> arclength_window<D>(std::span<const Vec<D>>, std::size_t, double);          \
  template PrincipalAxes<D> principal_axes<D>(std::span<const Vec<D>>);                            \
  template double line_angle<D>(const Vec<D>&, const Vec<D>&);                                     \
  template bool within_hausdorff<D>(std::span<const Vec<D>>, std::span<const Vec<D>>, double);

LCS_INSTANTIATE(2)
LCS_INSTANTIATE(3)
#undef LCS_INSTANTIATE

}  // namespace lcs
