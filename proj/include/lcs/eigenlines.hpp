#pragma once

#include "lcs/advect.hpp"
#include "lcs/cgtensor.hpp"

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace lcs {

/// Strainlines follow the weakest eigenvector xi_1; stretchlines follow xi_n.
enum class LineKind { Strainline, Stretchline };

enum class StopReason { None, Boundary, Singularity, Degenerate, MaxLength, Closed };

const char* to_string(LineKind kind);
const char* to_string(StopReason reason);
LineKind parse_line_kind(const std::string& name);

inline int eigen_index(LineKind kind) { return kind == LineKind::Strainline ? 0 : 1; }

struct TraceParams {
  double h = 0.0;            // arclength step; <= 0 selects half the grid spacing
  double max_length = 0.0;   // <= 0 selects 20 x box diameter
  double sing_radius = 0.0;  // <= 0 selects one cell diagonal
  EigvecInterp interp = EigvecInterp::NodeVectors;
};

/// Replaces non-positive entries of `params` by the defaults for this field.
TraceParams resolve_trace_params(const CGField<2>& cg, TraceParams params = {});

struct EigenLine {
  std::vector<Vec2> points;
  std::vector<double> s;  // arclength from points.front()
  LineKind kind = LineKind::Stretchline;
  Vec2 seed = Vec2::Zero();
  std::size_t seed_index = 0;  // position of the seed within points
  StopReason stop_fwd = StopReason::None;
  StopReason stop_bwd = StopReason::None;
  double length = 0.0;
  double q = std::numeric_limits<double>::quiet_NaN();
};

/// Traces an eigenvector-field trajectory through `seed` in both directions
/// with fixed-step RK4 in arclength. Each RK stage orients the interpolated
/// eigenvector along the previous stage direction.
///
/// Throws Error(Degenerate) for a degenerate seed and Error(EmptyLine) when
/// neither direction advances.
EigenLine trace_eigenline(const CGField<2>& cg, const Vec2& seed, LineKind kind, const TraceParams& params,
                          const SingularitySet* singularities = nullptr);

/// Arclength average of sqrt(lambda_2) (stretchlines) or sqrt(lambda_1)
/// (strainlines) along the polyline, by composite trapezoid rule.
double relative_stretching(const EigenLine& line, const CGField<2>& cg);

/// Length of the advected polyline at b divided by its length at a. The
/// line is densified to `max_spacing` (0 keeps the vertices) and advected
/// with midpoint refinement.
double advected_length_ratio(std::span<const Vec2> line, const VelocityField<2>& field, double a, double b,
                             const IntegratorParams& params, double max_spacing = 0.0,
                             const AdvectOptions& options = {});

}  // namespace lcs
