#pragma once

#include "lcs/integrator.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace lcs {

enum class SeedStatus : std::uint8_t { Ok = 0, Escaped = 1, Diverged = 2, Failed = 3 };

const char* to_string(SeedStatus status);

/// Final positions of a uniform seed grid and of the 2*Dim auxiliary points
/// x0 +/- aux_offset * e_i around every seed, over [a, b].
///
/// Seeds sit at cell centres of the box: seed i along axis d is at
/// lower[d] + (i + 1/2) * (upper[d] - lower[d]) / shape[d].
/// Auxiliary finals are ordered (+e0, -e0, +e1, -e1, ...).
template <int Dim>
struct FlowMapGrid {
  double a = 0.0;
  double b = 0.0;
  GridShape<Dim> shape{};
  Vec<Dim> lower = Vec<Dim>::Zero();
  Vec<Dim> upper = Vec<Dim>::Ones();
  std::array<bool, Dim> periodic{};  // axis spans a full period of a periodic domain
  double aux_offset = 0.0;

  std::vector<Vec<Dim>> seeds;
  std::vector<Vec<Dim>> finals;
  std::vector<Vec<Dim>> aux_finals;
  std::vector<SeedStatus> status;

  std::size_t size() const { return seeds.size(); }
  Vec<Dim> spacing() const;
  bool ok(std::size_t i) const { return status[i] == SeedStatus::Ok; }
};

/// Cell-centred seed positions over a box.
template <int Dim>
std::vector<Vec<Dim>> seed_grid(const GridShape<Dim>& shape, const Vec<Dim>& lower, const Vec<Dim>& upper);

/// Default auxiliary offset: 1e-4 times the smallest box extent.
template <int Dim>
double default_aux_offset(const Vec<Dim>& lower, const Vec<Dim>& upper);

struct FlowMapOptions {
  double aux_offset = 0.0;  // <= 0 selects default_aux_offset
  int threads = 0;          // <= 0 uses the OpenMP default
};

/// Integrates every seed and its auxiliary stencil in parallel. Output is
/// bit-identical for any thread count. Failures are recorded per seed.
/// `box` defaults to the field's domain.
template <int Dim>
FlowMapGrid<Dim> compute_flow_map(const VelocityField<Dim>& field, const GridShape<Dim>& shape, double a,
                                  double b, const IntegratorParams& params, const FlowMapOptions& options = {},
                                  const std::optional<Domain<Dim>>& box = std::nullopt);

namespace serial {

/// Single-threaded reference for compute_flow_map.
template <int Dim>
FlowMapGrid<Dim> compute_flow_map(const VelocityField<Dim>& field, const GridShape<Dim>& shape, double a,
                                  double b, const IntegratorParams& params, const FlowMapOptions& options = {},
                                  const std::optional<Domain<Dim>>& box = std::nullopt);

}  // namespace serial

/// Central-difference flow gradient at a seed; column i is
/// e_i + (d(+i) - d(-i)) / (2 aux_offset), with d the displacement of each
/// auxiliary trajectory.
template <int Dim>
Mat<Dim> flow_gradient(const FlowMapGrid<Dim>& fm, std::size_t seed);

/// Final position and flow gradient for a single point, using the same
/// auxiliary stencil as compute_flow_map.
template <int Dim>
struct PointFlow {
  Vec<Dim> start;
  Vec<Dim> final;
  Mat<Dim> gradient;
};

template <int Dim>
PointFlow<Dim> point_flow(const VelocityField<Dim>& field, const Vec<Dim>& x0, double a, double b,
                          double aux_offset, const IntegratorParams& params);

template <int Dim>
void save_flow_map(const FlowMapGrid<Dim>& fm, const std::filesystem::path& path);

template <int Dim>
FlowMapGrid<Dim> load_flow_map(const std::filesystem::path& path);

int flow_map_dimension(const std::filesystem::path& path);

}  // namespace lcs
