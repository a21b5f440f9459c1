#include "lcs/demos.hpp"

#include "lcs/geometry.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lcs {

Polyline<2> disk_tracers(const Vec2& center, double radius, std::size_t n) {
  Polyline<2> out;
  out.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radius * std::sqrt((double(i) + 0.5) / double(n));
    const double theta = golden * double(i);
    out.push_back(center + r * Vec2(std::cos(theta), std::sin(theta)));
  }
  return out;
}

Polyline<3> ball_tracers(const Vec3& center, double radius, int per_radius) {
  if (per_radius < 1) throw Error(ErrorKind::InvalidArgument, "ball_tracers needs per_radius >= 1");
  Polyline<3> out;
  const double h = radius / per_radius;
  for (int i = -per_radius; i <= per_radius; ++i)
    for (int j = -per_radius; j <= per_radius; ++j)
      for (int k = -per_radius; k <= per_radius; ++k) {
        const Vec3 offset(i * h, j * h, k * h);
        if (offset.norm() <= radius) out.push_back(center + offset);
      }
  return out;
}

namespace {

std::size_t find_vertex(const Polyline<2>& points, const Vec2& target) {
  const auto it = std::find_if(points.begin(), points.end(), [&](const Vec2& p) { return p == target; });
  if (it == points.end()) throw Error(ErrorKind::InvalidArgument, "vertex not found on polyline");
  return std::size_t(it - points.begin());
}

Vec2 discrete_tangent(const Polyline<2>& points, std::size_t i) {
  const std::size_t lo = i > 0 ? i - 1 : i;
  const std::size_t hi = i + 1 < points.size() ? i + 1 : i;
  return (points[hi] - points[lo]).normalized();
}

double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

}  // namespace

double DuffingBlobResult::max_angle_deg_at(double time) const {
  double worst = 0.0;
  for (const auto& s : snapshots)
    if (s.time == time) worst = std::max(worst, s.angle_deg);
  return worst;
}

DuffingBlobResult duffing_blobs(const DuffingBlobParams& params) {
  const auto field = make_duffing();
  const Vec2 origin = Vec2::Zero();
  const auto cg = cauchy_green<2>(compute_flow_map<2>(*field, params.grid, 0.0, params.horizon, params.integrator));
  const auto line = trace_eigenline(cg, origin, LineKind::Stretchline, {});

  DuffingBlobResult result;
  result.stretchline = ball_section<2>(line.points, line.seed_index, origin, params.line_radius);
  for (double t : params.times) {
    const auto adv = advect_curve<2>(result.stretchline, *field, 0.0, t, params.integrator);
    if (adv.escaped_count() > 0) throw EscapeError(t, "stretchline escaped during the blob demo");
    const std::size_t i = find_vertex(adv.initial, origin);
    result.advected.push_back(adv.points);
    result.tangents.push_back(discrete_tangent(adv.points, i));
  }
  for (double r : params.radii) {
    const auto blob = disk_tracers(origin, r, params.tracers);
    result.initial_blobs.push_back(blob);
    for (std::size_t k = 0; k < params.times.size(); ++k) {
      BlobSnapshot snap;
      snap.radius = r;
      snap.time = params.times[k];
      snap.tracers = advect_points<2>(blob, *field, 0.0, snap.time, params.integrator);
      const auto axes = principal_axes<2>(snap.tracers);
      snap.major_axis = axes.moments.vectors.col(1);
      snap.angle_deg = degrees(line_angle<2>(snap.major_axis, result.tangents[k]));
      result.snapshots.push_back(std::move(snap));
    }
  }
  return result;
}

AbcPlaneResult abc_plane(const AbcPlaneParams& params) {
  const auto field = make_abc();
  AbcPlaneResult result;
  const auto flow = point_flow<3>(*field, params.center, params.a, params.b, params.aux_offset, params.integrator);
  Mat3 C = flow.gradient.transpose() * flow.gradient;
  C = 0.5 * (C + C.transpose()).eval();
  result.plane = local_stretch_plane(C, params.center, params.radius);
  result.linearized_normal = flow.gradient.transpose().inverse() * result.plane.normal;
  result.linearized_normal.normalize();

  result.plane_initial = plane_vertices(result.plane, params.plane_vertices);
  result.plane_advected = advect_points<3>(result.plane_initial, *field, params.a, params.b, params.integrator);
  result.advected_plane_normal = principal_axes<3>(result.plane_advected).moments.vectors.col(0);

  result.ball_initial = ball_tracers(params.center, params.radius, params.ball_per_radius);
  result.ball_advected = advect_points<3>(result.ball_initial, *field, params.a, params.b, params.integrator);
  const auto axes = principal_axes<3>(result.ball_advected);
  result.ball_flat_axis = axes.moments.vectors.col(0);
  result.ball_moments = axes.moments.values;
  result.angle_deg = degrees(line_angle<3>(result.ball_flat_axis, result.advected_plane_normal));
  return result;
}

InstabilityResult backward_advection_instability(const InstabilityParams& params) {
  const auto field = make_double_gyre(params.gyre);
  FlowMapOptions fopts;
  fopts.threads = params.threads;
  const auto cg_f = cauchy_green<2>(
      compute_flow_map<2>(*field, params.grid, params.a, params.b, params.integrator, fopts), kDefaultDegeneracy,
      params.threads);
  SelectionParams sel;
  sel.seeds = params.seeds;
  sel.threads = params.threads;
  const auto set = extract_lcs(cg_f, LcsKind::Attracting, sel);

  InstabilityResult result;
  result.lcs = set.lines.front();
  const auto fwd = advect_curve<2>(result.lcs.points, *field, params.a, params.b, params.integrator);
  if (fwd.escaped_count() > 0) throw EscapeError(params.b, "attracting LCS escaped under forward advection");
  result.forward_image = fwd.points;
  const std::size_t i = find_vertex(fwd.initial, result.lcs.seed);
  result.seed_image = fwd.points[i];
  const double arm_lo = polyline_length<2>(std::span<const Vec2>(fwd.points.data(), i + 1));
  const double arm_hi = polyline_length<2>(std::span<const Vec2>(fwd.points.data() + i, fwd.points.size() - i));
  result.window = params.window_fraction * std::min(arm_lo, arm_hi);

  const auto cg_b = cauchy_green<2>(
      compute_flow_map<2>(*field, params.backward_grid, params.b, params.a, params.integrator, fopts), kDefaultDegeneracy,
      params.threads);
  TraceParams trace;
  trace.interp = params.backward_interp;
  const auto traced = trace_eigenline(cg_b, result.seed_image, LineKind::Strainline, trace);
  result.traced_at_b = arclength_window<2>(traced.points, traced.seed_index, result.window);
  result.forward_error = directed_hausdorff<2>(result.traced_at_b, result.forward_image);

  result.backward_image =
      advect_points<2>(result.traced_at_b, *field, params.b, params.a, params.integrator, params.threads);
  result.backward_error = directed_hausdorff<2>(result.backward_image, result.lcs.points);
  return result;
}

}  // namespace lcs
