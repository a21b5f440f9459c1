#pragma once

#include "lcs/eigenlines.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lcs {

/// Summary of a sampled error quantity.
struct CheckStats {
  std::size_t count = 0;
  double max = 0.0;
  double mean = 0.0;
  double tol = 0.0;
  std::size_t passed = 0;  // samples with value < tol
  double pass_fraction() const { return count ? double(passed) / double(count) : 1.0; }
  void add(double value);
  void finish();

 private:
  double sum_ = 0.0;
};

struct Lemma1Params {
  std::size_t n_seeds = 50;
  std::uint64_t seed = 0;
  double aux_offset = 0.0;  // <= 0 selects 1e-6 x the smallest box extent
  IntegratorParams integrator{Method::Rk45Adaptive, 1e-2, 1e-12, 1e-14, 1'000'000};
  double tol = 1e-3;
  std::size_t max_attempts_factor = 20;  // gives up after n_seeds * factor draws
};

struct Lemma1Report {
  CheckStats top;     // |lambda_n^f lambda_1^b - 1|
  CheckStats bottom;  // |lambda_1^f lambda_n^b - 1|
  std::size_t excluded = 0;  // draws whose trajectory or stencil escaped
  bool passed() const { return top.count > 0 && top.max < top.tol && bottom.max < bottom.tol; }
};

/// Eigenvalue reciprocity between the forward tensor at random x_a and the
/// backward tensor at x_b = F(x_a), both from pointwise stencil gradients.
/// Seeds are uniform in `box` (default: the field's domain).
template <int Dim>
Lemma1Report verify_lemma1(const VelocityField<Dim>& field, double a, double b, const Lemma1Params& params = {},
                           const std::optional<Domain<Dim>>& box = std::nullopt);

struct Theorem1Params {
  std::size_t n_lines = 20;
  std::size_t samples_per_line = 40;
  std::uint64_t seed = 0;
  GridShape<2> forward_grid{200, 200};
  GridShape<2> backward_grid{200, 200};
  double aux_offset = 0.0;  // pointwise stencil; <= 0 selects 1e-6 x the smallest box extent
  IntegratorParams integrator;
  TraceParams trace;
  double tol = 0.05;
  double required_fraction = 0.95;
  /// Samples whose backward anisotropy falls below this value are excluded.
  double degeneracy_threshold = 1e-2;
  /// Eigenvectors of C^b rotate quickly across ridges; blending tensors
  /// resolves them on much coarser grids than blending node vectors.
  EigvecInterp backward_interp = EigvecInterp::Tensor;
  int threads = 0;
};

struct Theorem1KindReport {
  LineKind kind = LineKind::Strainline;
  std::size_t lines = 0;
  CheckStats alignment;  // |<unit pushed-forward tangent, excluded eigenvector of C^b>|
  std::size_t excluded_escape = 0;
  std::size_t excluded_degenerate = 0;
  bool passed(double required_fraction) const { return alignment.pass_fraction() >= required_fraction; }
};

struct Theorem1Report {
  Theorem1KindReport strain;
  Theorem1KindReport stretch;
  double required_fraction = 0.95;
  bool passed() const { return strain.passed(required_fraction) && stretch.passed(required_fraction); }
};

/// Traces forward strainlines and stretchlines on `box`, maps sample points
/// to t = b, and checks the images against the backward tensor over [b, a]:
/// strainline images must be normal to xi_1^b, stretchline images normal to xi_n^b.
/// The image tangent at x_b is grad F(x_a) applied to the pointwise eigenvector at x_a.
Theorem1Report verify_theorem1(const VelocityField<2>& field, double a, double b, const Theorem1Params& params = {},
                               const std::optional<Domain<2>>& box = std::nullopt);

}  // namespace lcs
