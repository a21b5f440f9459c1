#include "lcs/eigenlines.hpp"

#include "lcs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lcs {

const char* to_string(LineKind kind) {
  return kind == LineKind::Strainline ? "strainline" : "stretchline";
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::None: return "none";
    case StopReason::Boundary: return "boundary";
    case StopReason::Singularity: return "singularity";
    case StopReason::Degenerate: return "degenerate";
    case StopReason::MaxLength: return "max_length";
    case StopReason::Closed: return "closed";
  }
  return "unknown";
}

LineKind parse_line_kind(const std::string& name) {
  if (name == "strainline" || name == "strain") return LineKind::Strainline;
  if (name == "stretchline" || name == "stretch") return LineKind::Stretchline;
  throw Error(ErrorKind::InvalidArgument, "unknown line kind: " + name);
}

TraceParams resolve_trace_params(const CGField<2>& cg, TraceParams params) {
  if (!(params.h > 0)) params.h = 0.5 * cg.spacing().minCoeff();
  if (!(params.max_length > 0)) params.max_length = 2.0 * (cg.upper - cg.lower).norm() * 10.0;
  if (!(params.sing_radius > 0)) params.sing_radius = cg.cell_diagonal();
  return params;
}

namespace {

struct HalfLine {
  std::vector<Vec2> points;  // excludes the seed
  StopReason reason = StopReason::None;
  double length = 0.0;
};

bool near_singularity(const Vec2& x, const SingularitySet* sing, double radius) {
  if (!sing) return false;
  for (const auto& p : sing->points)
    if ((x - p).norm() < radius) return true;
  return false;
}

HalfLine trace_half(const CGField<2>& cg, const Vec2& seed, const Vec2& dir0, int k, const TraceParams& p,
                    const SingularitySet* sing, double budget) {
  HalfLine half;
  Vec2 x = seed;
  Vec2 heading = dir0;
  const double h = p.h;
  auto field = [&](const Vec2& at, const Vec2& ref) { return interpolate_eigvec<2>(cg, at, k, ref, p.interp); };

  while (true) {
    if (half.length + h > budget) {
      half.reason = StopReason::MaxLength;
      return half;
    }
    Vec2 x_new;
    try {
      const Vec2 k1 = field(x, heading);
      const Vec2 k2 = field(x + 0.5 * h * k1, k1);
      const Vec2 k3 = field(x + 0.5 * h * k2, k2);
      const Vec2 k4 = field(x + h * k3, k3);
      x_new = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const Error& e) {
      half.reason = e.kind() == ErrorKind::OutOfDomain ? StopReason::Boundary : StopReason::Degenerate;
      return half;
    }
    if (!locate<2>(cg, x_new)) {
      half.reason = StopReason::Boundary;
      return half;
    }
    if (near_singularity(x_new, sing, p.sing_radius)) {
      half.reason = StopReason::Singularity;
      return half;
    }
    const Vec2 step = x_new - x;
    half.length += step.norm();
    half.points.push_back(x_new);
    heading = step.normalized();
    x = x_new;
    if (half.length > 4.0 * h && (x - seed).norm() < 0.5 * h && heading.dot(dir0) > 0) {
      half.reason = StopReason::Closed;
      return half;
    }
  }
}

}  // namespace

EigenLine trace_eigenline(const CGField<2>& cg, const Vec2& seed, LineKind kind, const TraceParams& params,
                          const SingularitySet* singularities) {
  const TraceParams p = resolve_trace_params(cg, params);
  const int k = eigen_index(kind);

  Vec2 dir0;
  try {
    dir0 = interpolate_eigvec<2>(cg, seed, k, Vec2(1.0, 0.0), p.interp);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::OutOfDomain) throw Error(ErrorKind::OutOfDomain, "seed outside the tensor grid");
    throw Error(ErrorKind::Degenerate, "seed lies in a degenerate region");
  }

  EigenLine line;
  line.kind = kind;
  line.seed = seed;
  if (near_singularity(seed, singularities, p.sing_radius))
    throw Error(ErrorKind::EmptyLine, "seed lies within the singularity radius");

  const HalfLine fwd = trace_half(cg, seed, dir0, k, p, singularities, p.max_length);
  HalfLine bwd;
  if (fwd.reason == StopReason::Closed) {
    bwd.reason = StopReason::Closed;
  } else {
    bwd = trace_half(cg, seed, -dir0, k, p, singularities, p.max_length - fwd.length);
  }
  if (fwd.points.empty() && bwd.points.empty()) throw Error(ErrorKind::EmptyLine, "line stopped at its seed");

  line.points.reserve(fwd.points.size() + bwd.points.size() + 1);
  line.points.assign(bwd.points.rbegin(), bwd.points.rend());
  line.seed_index = line.points.size();
  line.points.push_back(seed);
  line.points.insert(line.points.end(), fwd.points.begin(), fwd.points.end());
  line.stop_fwd = fwd.reason;
  line.stop_bwd = bwd.reason;

  line.s.resize(line.points.size());
  line.s[0] = 0.0;
  for (std::size_t i = 1; i < line.points.size(); ++i)
    line.s[i] = line.s[i - 1] + (line.points[i] - line.points[i - 1]).norm();
  line.length = line.s.back();
  return line;
}

double relative_stretching(const EigenLine& line, const CGField<2>& cg) {
  if (line.points.size() < 2) throw Error(ErrorKind::EmptyLine, "relative stretching of an empty line");
  const int k = eigen_index(line.kind);
  std::vector<double> root(line.points.size());
  std::vector<std::size_t> gaps;
  for (std::size_t i = 0; i < line.points.size(); ++i) {
    try {
      root[i] = std::sqrt(interpolate_lambda<2>(cg, line.points[i], k));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PartialData) throw;
      gaps.push_back(i);
    }
  }
  if (!gaps.empty()) {
    std::ostringstream msg;
    msg << "invalid tensor data under " << gaps.size() << " vertices:";
    for (std::size_t g = 0; g < gaps.size(); ++g) {
      std::size_t end = g;
      while (end + 1 < gaps.size() && gaps[end + 1] == gaps[end] + 1) ++end;
      msg << ' ' << gaps[g];
      if (end > g) msg << '-' << gaps[end];
      g = end;
    }
    throw Error(ErrorKind::PartialData, msg.str());
  }
  double integral = 0.0, length = 0.0;
  for (std::size_t i = 1; i < line.points.size(); ++i) {
    const double ds = (line.points[i] - line.points[i - 1]).norm();
    integral += 0.5 * (root[i] + root[i - 1]) * ds;
    length += ds;
  }
  if (!(length > 0)) throw Error(ErrorKind::EmptyLine, "line has zero length");
  return integral / length;
}

double advected_length_ratio(std::span<const Vec2> line, const VelocityField<2>& field, double a, double b,
                             const IntegratorParams& params, double max_spacing, const AdvectOptions& options) {
  const Polyline<2> dense = max_spacing > 0 ? densify<2>(line, max_spacing) : Polyline<2>(line.begin(), line.end());
  const double initial = polyline_length<2>(dense);
  if (!(initial > 0)) throw Error(ErrorKind::EmptyLine, "advected length ratio of a zero-length line");
  const auto advected = advect_curve<2>(dense, field, a, b, params, options);
  if (advected.escaped_count() > 0)
    throw EscapeError(b, "vertex escaped while advecting line for the length ratio");
  return polyline_length<2>(advected.points) / initial;
}

}  // namespace lcs
