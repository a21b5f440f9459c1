#include "cg_builders.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include "lcs/eigenlines.hpp"
#include "lcs/geometry.hpp"

#include <cmath>
#include <random>

using namespace lcs;

namespace {

IntegratorParams tight() {
  IntegratorParams p;
  p.rel_tol = 1e-12;
  p.abs_tol = 1e-14;
  return p;
}

CGField<2> saddle_cg() {
  const auto f = testing::linear_saddle(1.0, 3.0);
  return cauchy_green<2>(compute_flow_map<2>(*f, {21, 21}, 0.0, 1.0, tight(), {1e-4, 0},
                                             Domain<2>(Vec2(-1, -1), Vec2(1, 1))));
}

const CGField<2>& gyre_cg() {
  static const CGField<2> cg = [] {
    const auto f = make_double_gyre();
    return cauchy_green<2>(compute_flow_map<2>(*f, {200, 100}, 0.0, 10.0, IntegratorParams{}));
  }();
  return cg;
}

// Short horizon: strain ridges stay wider than the grid spacing.
const CGField<2>& short_gyre_cg() {
  static const CGField<2> cg = [] {
    const auto f = make_double_gyre();
    return cauchy_green<2>(compute_flow_map<2>(*f, {200, 100}, 0.0, 2.0, IntegratorParams{}));
  }();
  return cg;
}

std::vector<Vec2> random_points(std::size_t n, const Vec2& lo, const Vec2& hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(lo[0] + u(rng) * (hi[0] - lo[0]), lo[1] + u(rng) * (hi[1] - lo[1]));
  return out;
}

}  // namespace

TEST_CASE("linear saddle lines") {
  const auto cg = saddle_cg();
  const auto line = trace_eigenline(cg, Vec2(0, 0), LineKind::Stretchline, {});
  CHECK(line.stop_fwd == StopReason::Boundary);
  CHECK(line.stop_bwd == StopReason::Boundary);
  const double h = resolve_trace_params(cg).h;
  for (const auto& p : line.points) CHECK(std::abs(p[1]) < 1e-12);
  // Spans the node hull [-1 + h_grid/2, 1 - h_grid/2] up to one step.
  CHECK(line.points.front()[0] < -1.0 + 2 * h + 2 * h);
  CHECK(line.points.back()[0] > 1.0 - 2 * h - 2 * h);
  CHECK(relative_stretching(line, cg) == doctest::Approx(std::exp(1.0)).epsilon(1e-6));

  const auto strain = trace_eigenline(cg, Vec2(0.2, 0.1), LineKind::Strainline, {});
  for (const auto& p : strain.points) CHECK(std::abs(p[0] - 0.2) < 1e-12);
  CHECK(relative_stretching(strain, cg) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));

  TraceParams shortp;
  shortp.max_length = 0.3;
  const auto cut = trace_eigenline(cg, Vec2(0, 0), LineKind::Stretchline, shortp);
  CHECK(cut.stop_fwd == StopReason::MaxLength);
  CHECK(cut.length <= 0.3 + 1e-12);
}

TEST_CASE("relative stretching of the identity is one") {
  const auto cg = testing::cg_from_tensor({5, 5}, Vec2(-1, -1), Vec2(1, 1), [](const Vec2&) { return Mat2::Identity().eval(); });
  EigenLine line;
  line.kind = LineKind::Stretchline;
  line.points = {Vec2(-0.5, -0.5), Vec2(0.0, 0.1), Vec2(0.4, 0.3)};
  CHECK(relative_stretching(line, cg) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_ERROR_KIND(trace_eigenline(cg, Vec2(0, 0), LineKind::Stretchline, {}), ErrorKind::Degenerate);
}

TEST_CASE("advected length ratio") {
  const Polyline<2> line{Vec2(-0.5, 0.0), Vec2(0.0, 0.2), Vec2(0.5, -0.1)};
  CHECK(advected_length_ratio(line, *testing::zero_field_2d(), 0.0, 1.0, tight()) == 1.0);
  CHECK(advected_length_ratio(line, *testing::rigid_rotation(), 0.0, 1.3, tight(), 0.01) ==
        doctest::Approx(1.0).epsilon(1e-6));
  const Polyline<2> horizontal{Vec2(-0.3, 0.0), Vec2(0.3, 0.0)};
  CHECK(advected_length_ratio(horizontal, *testing::linear_saddle(1.0, 3.0), 0.0, 1.0, tight()) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-6));
}

TEST_CASE("closed eigenvector orbits stop at closure") {
  // xi_2 is tangent to circles around the origin.
  const auto cg = testing::cg_from_tensor({80, 80}, Vec2(-1, -1), Vec2(1, 1), [](const Vec2& x) {
    const Vec2 t = Vec2(-x[1], x[0]).normalized();
    return (Mat2::Identity() + 3.0 * t * t.transpose()).eval();
  });
  const auto line = trace_eigenline(cg, Vec2(0.5, 0.0), LineKind::Stretchline, {});
  CHECK(line.stop_fwd == StopReason::Closed);
  CHECK(line.length == doctest::Approx(2 * 3.14159265358979 * 0.5).epsilon(0.02));
  for (const auto& p : line.points) CHECK(std::abs(p.norm() - 0.5) < 1e-3);
}

TEST_CASE("singularity handling") {
  const auto cg = saddle_cg();
  SingularitySet sing;
  sing.points = {Vec2(0.5, 0.0)};
  const auto line = trace_eigenline(cg, Vec2(0, 0), LineKind::Stretchline, {}, &sing);
  CHECK(line.stop_fwd == StopReason::Singularity);
  CHECK(line.stop_bwd == StopReason::Boundary);
  CHECK(line.points.back()[0] < 0.5 - cg.cell_diagonal() + 1e-12);
  CHECK_ERROR_KIND(trace_eigenline(cg, Vec2(0.5, 0.01), LineKind::Stretchline, {}, &sing), ErrorKind::EmptyLine);
}

TEST_CASE("duffing strainline follows the stable manifold") {
  const auto f = make_duffing();
  const auto cg = cauchy_green<2>(compute_flow_map<2>(*f, {201, 201}, 0.0, 2.0, IntegratorParams{}, {},
                                                      Domain<2>(Vec2(-1.2, -1.2), Vec2(1.2, 1.2))));
  const auto line = trace_eigenline(cg, Vec2(0, 0), LineKind::Strainline, {});
  const auto section = ball_section<2>(line.points, line.seed_index, Vec2::Zero(), 1.0);
  const auto branch = clip_to_ball<2>(oracle::duffing_homoclinic_branch(-1.0, 1.0, 4000), Vec2::Zero(), 1.0);
  REQUIRE(section.size() > 10);
  CHECK(hausdorff<2>(section, branch) < 0.05);
  const auto unstable = clip_to_ball<2>(oracle::duffing_homoclinic_branch(1.0, 1.0, 4000), Vec2::Zero(), 1.0);
  CHECK(hausdorff<2>(section, unstable) > 0.05);
}

TEST_CASE("double gyre line invariants") {
  const auto& cg = short_gyre_cg();
  const auto p = resolve_trace_params(cg);
  const auto sing = detect_singularities(cg, 0.05);
  std::size_t traced = 0;
  for (const auto& seed : random_points(12, Vec2(0.1, 0.1), Vec2(1.9, 0.9), 21)) {
    for (auto kind : {LineKind::Stretchline, LineKind::Strainline}) {
      EigenLine line;
      try {
        line = trace_eigenline(cg, seed, kind, {}, &sing);
      } catch (const Error&) {
        continue;
      }
      ++traced;
      const int k = eigen_index(kind);
      for (std::size_t i = 1; i < line.points.size(); ++i) {
        const double ds = (line.points[i] - line.points[i - 1]).norm();
        CHECK(ds >= 0.5 * p.h);
        CHECK(ds <= 1.5 * p.h);
      }
      // Discrete tangent against the interpolated eigenvector.
      std::size_t bad = 0, interior = 0;
      for (std::size_t i = 1; i + 1 < line.points.size(); ++i) {
        const Vec2 t = (line.points[i + 1] - line.points[i - 1]).normalized();
        try {
          const Vec2 xi = interpolate_eigvec<2>(cg, line.points[i], k, t);
          ++interior;
          bad += std::acos(std::min(1.0, t.dot(xi))) >= 0.05;
        } catch (const Error&) {
        }
      }
      CHECK(bad == 0);
      CHECK(interior > 0);
      const double q = relative_stretching(line, cg);
      if (kind == LineKind::Stretchline)
        CHECK(q >= 1.0);
      else
        CHECK(q <= 1.0);
    }
  }
  CHECK(traced >= 12);
}

TEST_CASE("retrace and orientation robustness") {
  const auto& cg = gyre_cg();
  const double h = resolve_trace_params(cg).h;
  TraceParams tp;
  tp.max_length = 2.0;
  for (const auto& seed : random_points(5, Vec2(0.2, 0.2), Vec2(1.8, 0.8), 5)) {
    EigenLine line;
    try {
      line = trace_eigenline(cg, seed, LineKind::Stretchline, tp);
    } catch (const Error&) {
      continue;
    }
    if (line.points.size() < 40) continue;
    const std::size_t mid = line.points.size() / 2;
    const auto again = trace_eigenline(cg, line.points[mid], LineKind::Stretchline, tp);
    const auto window = arclength_window<2>(again.points, again.seed_index, 0.3);
    const auto original = arclength_window<2>(line.points, mid, 0.3 + 2 * h);
    CHECK(directed_hausdorff<2>(window, original) <= h);

    auto flipped = cg;
    for (auto& xi : flipped.xis) xi = -xi;
    const auto same = trace_eigenline(flipped, seed, LineKind::Stretchline, tp);
    REQUIRE(same.points.size() == line.points.size());
    for (std::size_t i = 0; i < line.points.size(); ++i) CHECK((same.points[i] - line.points[i]).norm() < 1e-12);
  }
}

TEST_CASE("strainlines and stretchlines cross orthogonally") {
  const auto& cg = gyre_cg();
  for (const auto& x : random_points(50, Vec2(0.1, 0.1), Vec2(1.9, 0.9), 8)) {
    try {
      const Vec2 e1 = interpolate_eigvec<2>(cg, x, 0, Vec2(1, 0), EigvecInterp::Tensor);
      const Vec2 e2 = interpolate_eigvec<2>(cg, x, 1, Vec2(1, 0), EigvecInterp::Tensor);
      CHECK(std::abs(e1.dot(e2)) < 1e-8);
    } catch (const Error&) {
    }
  }
  for (std::size_t node = 0; node < cg.size(); node += 97) {
    if (!cg.usable(node)) continue;
    // At a node the two line directions at the seed are exactly orthogonal.
    const Vec2 x = cg.node_position(node);
    try {
      const Vec2 e1 = interpolate_eigvec<2>(cg, x, 0, Vec2(1, 0));
      const Vec2 e2 = interpolate_eigvec<2>(cg, x, 1, Vec2(1, 0));
      CHECK(std::abs(e1.dot(e2)) < 1e-8);
    } catch (const Error&) {
    }
  }
}

TEST_CASE("double gyre stretching matches the advected length") {
  const auto f = make_double_gyre();
  const auto& cg = short_gyre_cg();
  TraceParams tp;
  tp.max_length = 1.0;
  std::size_t compared = 0;
  for (const auto& seed : random_points(20, Vec2(0.2, 0.2), Vec2(1.8, 0.8), 33)) {
    EigenLine line;
    try {
      line = trace_eigenline(cg, seed, LineKind::Stretchline, tp);
    } catch (const Error&) {
      continue;
    }
    const double q = relative_stretching(line, cg);
    const double oracle_q = advected_length_ratio(line.points, *f, 0.0, 2.0, tight(), 0.25 * resolve_trace_params(cg).h);
    CHECK(std::abs(q - oracle_q) / oracle_q < 0.01);
    ++compared;
  }
  CHECK(compared >= 10);
}
