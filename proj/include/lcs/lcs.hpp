#pragma once

#include "lcs/eigenlines.hpp"

#include <string>
#include <vector>

namespace lcs {

enum class LcsKind { Attracting, Repelling };

const char* to_string(LcsKind kind);
LcsKind parse_lcs_kind(const std::string& name);

/// Attracting LCSs are traced as stretchlines, repelling ones as strainlines.
inline LineKind line_kind_for(LcsKind kind) {
  return kind == LcsKind::Attracting ? LineKind::Stretchline : LineKind::Strainline;
}

struct SelectionParams {
  GridShape<2> seeds{30, 30};
  double neighborhood_radius = 0.0;    // <= 0 selects two seed spacings
  double dedupe_tol = 0.0;             // <= 0 selects one tensor-grid cell diagonal
  double tie_rel_tol = 1e-9;           // q values this close count as equal
  double singularity_threshold = 0.0;  // <= 0 disables singularity stopping
  TraceParams trace;
  int threads = 0;
};

struct LcsSet {
  LcsKind kind = LcsKind::Attracting;
  std::vector<EigenLine> lines;  // selected, most extremal first
  std::vector<double> q_values;
  double neighborhood_radius = 0.0;
  double dedupe_tol = 0.0;
  std::vector<EigenLine> candidates;  // every successfully traced seed line
  std::vector<std::size_t> selected;  // indices of `lines` within `candidates`
  SingularitySet singularities;
};

/// Local-extremality predicate: candidate i has q at least (attracting) or at
/// most (repelling) that of every candidate whose seed lies within radius.
bool is_local_extremum(const std::vector<EigenLine>& candidates, std::size_t i, LcsKind kind, double radius,
                       double tie_rel_tol);

/// Traces one line per seed, scores it with relative_stretching, keeps the
/// local extrema and removes Hausdorff-duplicates (the more extremal line wins).
/// Throws Error(EmptyField) when no seed yields a line.
LcsSet extract_lcs(const CGField<2>& cg, LcsKind kind, const SelectionParams& params = {});

/// Plane through `center` normal to the weakest Cauchy-Green eigenvector.
struct StretchPlane {
  Vec3 center = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();  // xi_1
  Vec3 u = Vec3::UnitX();       // xi_2
  Vec3 v = Vec3::UnitY();       // xi_3
  Vec3 lambdas = Vec3::Ones();
  double half_extent = 0.0;
  double residual = 0.0;  // |C normal - lambda_1 normal|
};

/// Throws Error(Degenerate) when lambda_1 and lambda_2 are not separated.
StretchPlane local_stretch_plane(const Mat3& C, const Vec3& center, double half_extent,
                                 double eps_deg = kDefaultDegeneracy);

StretchPlane local_stretch_plane(const VelocityField<3>& field, const Vec3& center, double a, double b,
                                 double half_extent, double aux_offset, const IntegratorParams& params,
                                 double eps_deg = kDefaultDegeneracy);

/// n x n vertex grid spanning the plane patch.
Polyline<3> plane_vertices(const StretchPlane& plane, int n);

}  // namespace lcs
