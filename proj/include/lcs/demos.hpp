#pragma once

#include "lcs/lcs.hpp"

#include <vector>

namespace lcs {

/// Filled disk of tracers (sunflower spiral, n points).
Polyline<2> disk_tracers(const Vec2& center, double radius, std::size_t n);
/// Filled ball of tracers on a cubic lattice with `per_radius` points per radius.
Polyline<3> ball_tracers(const Vec3& center, double radius, int per_radius);

// Tracer blobs at the Duffing saddle elongate along the advected stretchline.

struct DuffingBlobParams {
  std::vector<double> radii{1e-3, 5e-3, 1e-2};
  std::vector<double> times{0.1, 0.2, 0.4};
  double horizon = 2.0;  // stretchline computed over [0, horizon]
  GridShape<2> grid{200, 200};
  std::size_t tracers = 2000;
  double line_radius = 1.0;  // stretchline kept within this distance of the origin
  IntegratorParams integrator;
};

struct BlobSnapshot {
  double radius = 0.0;
  double time = 0.0;
  Polyline<2> tracers;   // advected
  Vec2 major_axis = Vec2::UnitX();
  double angle_deg = 0.0;  // between major_axis and the advected stretchline tangent
};

struct DuffingBlobResult {
  Polyline<2> stretchline;             // at t = 0
  std::vector<Polyline<2>> advected;   // per entry of params.times
  std::vector<Vec2> tangents;          // advected stretchline tangent at the image of the origin
  std::vector<Polyline<2>> initial_blobs;
  std::vector<BlobSnapshot> snapshots;  // radius-major, then time
  double max_angle_deg_at(double time) const;
};

DuffingBlobResult duffing_blobs(const DuffingBlobParams& params = {});

// Local stretch-plane of the ABC flow and the flattening of a tracer ball.

struct AbcPlaneParams {
  Vec3 center{3.14159265358979323846, 3.14159265358979323846, 3.14159265358979323846};
  double a = 0.0;
  double b = 4.0;
  double radius = 0.1;
  int plane_vertices = 21;  // per side
  int ball_per_radius = 8;
  double aux_offset = 1e-6;
  IntegratorParams integrator{Method::Rk45Adaptive, 1e-2, 1e-10, 1e-12, 1'000'000};
};

struct AbcPlaneResult {
  StretchPlane plane;
  Polyline<3> plane_initial;
  Polyline<3> plane_advected;
  Vec3 advected_plane_normal = Vec3::UnitZ();  // smallest principal axis of the advected plane vertices
  Vec3 linearized_normal = Vec3::UnitZ();      // grad F^{-T} nu
  Polyline<3> ball_initial;
  Polyline<3> ball_advected;
  Vec3 ball_flat_axis = Vec3::UnitZ();  // smallest second-moment axis of the advected ball
  Vec3 ball_moments = Vec3::Zero();
  double angle_deg = 0.0;  // between ball_flat_axis and advected_plane_normal
};

AbcPlaneResult abc_plane(const AbcPlaneParams& params = {});

// Backward advection of an attracting LCS without refinement versus the
// forward-consistent route through the backward strainline.

struct InstabilityParams {
  DoubleGyreParams gyre;
  double a = 0.0;
  double b = 10.0;
  GridShape<2> grid{200, 100};
  GridShape<2> backward_grid{400, 200};
  GridShape<2> seeds{20, 10};
  double window_fraction = 0.5;  // of the shorter arm of the forward image around the seed image
  EigvecInterp backward_interp = EigvecInterp::Tensor;
  IntegratorParams integrator;
  int threads = 0;
};

struct InstabilityResult {
  EigenLine lcs;                 // attracting LCS at t = a (the top-ranked stretchline)
  Polyline<2> forward_image;     // lcs advected to b with refinement
  Vec2 seed_image = Vec2::Zero();
  Polyline<2> traced_at_b;       // backward strainline through the seed image, windowed
  Polyline<2> backward_image;    // traced_at_b advected back to a without refinement
  double window = 0.0;
  double forward_error = 0.0;    // directed distance traced_at_b -> forward_image
  double backward_error = 0.0;   // directed distance backward_image -> lcs
  double ratio() const { return backward_error / forward_error; }
};

InstabilityResult backward_advection_instability(const InstabilityParams& params = {});

}  // namespace lcs
