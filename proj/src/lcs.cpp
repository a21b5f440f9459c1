#include "lcs/lcs.hpp"

#include "lcs/geometry.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <optional>

namespace lcs {

const char* to_string(LcsKind kind) { return kind == LcsKind::Attracting ? "attracting" : "repelling"; }

LcsKind parse_lcs_kind(const std::string& name) {
  if (name == "attracting") return LcsKind::Attracting;
  if (name == "repelling") return LcsKind::Repelling;
  throw Error(ErrorKind::InvalidArgument, "unknown LCS kind: " + name);
}

bool is_local_extremum(const std::vector<EigenLine>& candidates, std::size_t i, LcsKind kind, double radius,
                       double tie_rel_tol) {
  const double qi = candidates[i].q;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (j == i || (candidates[j].seed - candidates[i].seed).norm() > radius) continue;
    const double qj = candidates[j].q;
    const double slack = tie_rel_tol * std::max(std::abs(qi), std::abs(qj));
    if (kind == LcsKind::Attracting ? qi < qj - slack : qi > qj + slack) return false;
  }
  return true;
}

LcsSet extract_lcs(const CGField<2>& cg, LcsKind kind, const SelectionParams& params) {
  LcsSet set;
  set.kind = kind;
  const TraceParams trace = resolve_trace_params(cg, params.trace);
  const auto seeds = seed_grid<2>(params.seeds, cg.lower, cg.upper);
  Vec2 seed_spacing;
  for (int d = 0; d < 2; ++d) seed_spacing[d] = (cg.upper[d] - cg.lower[d]) / double(params.seeds[d]);
  set.neighborhood_radius =
      params.neighborhood_radius > 0 ? params.neighborhood_radius : 2.0 * seed_spacing.maxCoeff();
  set.dedupe_tol = params.dedupe_tol > 0 ? params.dedupe_tol : cg.cell_diagonal();
  if (params.singularity_threshold > 0) set.singularities = detect_singularities(cg, params.singularity_threshold);
  const SingularitySet* sing = params.singularity_threshold > 0 ? &set.singularities : nullptr;

  const LineKind line_kind = line_kind_for(kind);
  std::vector<std::optional<EigenLine>> traced(seeds.size());
  const auto n = static_cast<std::ptrdiff_t>(seeds.size());
  const int nt = params.threads > 0 ? params.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      EigenLine line = trace_eigenline(cg, seeds[i], line_kind, trace, sing);
      line.q = relative_stretching(line, cg);
      traced[i] = std::move(line);
    } catch (const Error&) {
      // Degenerate, empty and partially covered seeds are not candidates.
    }
  }
  for (auto& t : traced)
    if (t) set.candidates.push_back(std::move(*t));
  if (set.candidates.empty()) throw Error(ErrorKind::EmptyField, "no seed produced a traceable line");

  std::vector<std::size_t> extrema;
  for (std::size_t i = 0; i < set.candidates.size(); ++i)
    if (is_local_extremum(set.candidates, i, kind, set.neighborhood_radius, params.tie_rel_tol)) extrema.push_back(i);

  std::stable_sort(extrema.begin(), extrema.end(), [&](std::size_t i, std::size_t j) {
    return kind == LcsKind::Attracting ? set.candidates[i].q > set.candidates[j].q
                                       : set.candidates[i].q < set.candidates[j].q;
  });
  for (std::size_t i : extrema) {
    const auto& line = set.candidates[i].points;
    const bool duplicate = std::any_of(set.selected.begin(), set.selected.end(), [&](std::size_t j) {
      return within_hausdorff<2>(line, set.candidates[j].points, set.dedupe_tol);
    });
    if (duplicate) continue;
    set.selected.push_back(i);
    set.lines.push_back(set.candidates[i]);
    set.q_values.push_back(set.candidates[i].q);
  }
  return set;
}

StretchPlane local_stretch_plane(const Mat3& C, const Vec3& center, double half_extent, double eps_deg) {
  const auto eig = eig_sym<3>(C, eps_deg);
  if ((eig.values[1] - eig.values[0]) / eig.values[1] < eps_deg)
    throw Error(ErrorKind::Degenerate, "weakest eigenvalue is repeated at the plane centre");
  StretchPlane plane;
  plane.center = center;
  plane.normal = eig.vectors.col(0);
  plane.u = eig.vectors.col(1);
  plane.v = eig.vectors.col(2);
  plane.lambdas = eig.values;
  plane.half_extent = half_extent;
  plane.residual = (C * plane.normal - eig.values[0] * plane.normal).norm();
  return plane;
}

StretchPlane local_stretch_plane(const VelocityField<3>& field, const Vec3& center, double a, double b,
                                 double half_extent, double aux_offset, const IntegratorParams& params,
                                 double eps_deg) {
  const auto flow = point_flow<3>(field, center, a, b, aux_offset, params);
  Mat3 C = flow.gradient.transpose() * flow.gradient;
  C = 0.5 * (C + C.transpose()).eval();
  return local_stretch_plane(C, center, half_extent, eps_deg);
}

Polyline<3> plane_vertices(const StretchPlane& plane, int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "plane grid needs n >= 2");
  Polyline<3> out;
  out.reserve(std::size_t(n) * std::size_t(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double s = -plane.half_extent + 2.0 * plane.half_extent * i / (n - 1);
      const double t = -plane.half_extent + 2.0 * plane.half_extent * j / (n - 1);
      out.push_back(plane.center + s * plane.u + t * plane.v);
    }
  return out;
}

}  // namespace lcs
