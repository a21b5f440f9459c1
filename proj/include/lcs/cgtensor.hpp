#pragma once

#include "lcs/eigen_sym.hpp"
#include "lcs/flowmap.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace lcs {

/// Cauchy-Green tensor C = G^T G on the seed grid of a flow map, with its
/// sorted eigen-system. Nodes share the FlowMapGrid seed layout.
template <int Dim>
struct CGField {
  double a = 0.0;
  double b = 0.0;
  GridShape<Dim> shape{};
  Vec<Dim> lower = Vec<Dim>::Zero();
  Vec<Dim> upper = Vec<Dim>::Ones();
  std::array<bool, Dim> periodic{};
  double eps_deg = kDefaultDegeneracy;

  std::vector<Mat<Dim>> C;
  std::vector<Vec<Dim>> lambdas;  // ascending
  std::vector<Mat<Dim>> xis;      // column k pairs with lambdas[k]
  std::vector<std::uint8_t> valid;
  std::vector<std::uint8_t> degenerate;

  std::size_t size() const { return C.size(); }
  Vec<Dim> spacing() const;
  Vec<Dim> node_position(std::size_t node) const;
  bool usable(std::size_t node) const { return valid[node] && !degenerate[node]; }
  double cell_diagonal() const { return spacing().norm(); }
};

template <int Dim>
CGField<Dim> cauchy_green(const FlowMapGrid<Dim>& fm, double eps_deg = kDefaultDegeneracy, int threads = 0);

namespace serial {

template <int Dim>
CGField<Dim> cauchy_green(const FlowMapGrid<Dim>& fm, double eps_deg = kDefaultDegeneracy);

}  // namespace serial

/// Multilinear interpolation weights over the 2^Dim nodes around x.
template <int Dim>
struct Stencil {
  std::array<std::size_t, (1u << Dim)> nodes{};
  std::array<double, (1u << Dim)> weights{};
};

/// Nullopt when x lies outside the node hull along a non-periodic axis.
template <int Dim>
std::optional<Stencil<Dim>> locate(const CGField<Dim>& cg, const Vec<Dim>& x);

enum class EigvecInterp {
  NodeVectors,  // sign-align node eigenvectors, blend, renormalise
  Tensor,       // blend tensors, then decompose
};

/// Eigenvector k (0 = weakest) at an off-node position, oriented so that
/// <result, ref_dir> >= 0. Throws Error(Degenerate) when a contributing node
/// is invalid or degenerate and Error(OutOfDomain) outside the node hull.
template <int Dim>
Vec<Dim> interpolate_eigvec(const CGField<Dim>& cg, const Vec<Dim>& x, int k, const Vec<Dim>& ref_dir,
                            EigvecInterp mode = EigvecInterp::NodeVectors);

/// Eigenvalue k at x, interpolated linearly in log(lambda).
/// Throws Error(PartialData) when a contributing node is invalid.
template <int Dim>
double interpolate_lambda(const CGField<Dim>& cg, const Vec<Dim>& x, int k);

/// Relative eigenvalue gap (l_n - l_1) / l_n; zero where C is isotropic.
template <int Dim>
double anisotropy(const CGField<Dim>& cg, std::size_t node);

/// Multilinear interpolation of anisotropy(); NaN outside the hull or over invalid nodes.
template <int Dim>
double interpolate_anisotropy(const CGField<Dim>& cg, const Vec<Dim>& x);

struct SingularitySet {
  std::vector<Vec2> points;
  double threshold = 0.0;
};

/// Cells whose sub-grid minimum of (l2 - l1) / l2 drops below threshold.
SingularitySet detect_singularities(const CGField<2>& cg, double threshold);

/// ln(l_n) / (2 |b - a|) per node; NaN at invalid nodes.
template <int Dim>
std::vector<double> ftle(const CGField<Dim>& cg);

template <int Dim>
void save_cg(const CGField<Dim>& cg, const std::filesystem::path& path);

template <int Dim>
CGField<Dim> load_cg(const std::filesystem::path& path);

int cg_dimension(const std::filesystem::path& path);

}  // namespace lcs
