#include "cg_builders.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include "lcs/cgtensor.hpp"

#include <cmath>
#include <random>

using namespace lcs;

namespace {

CGField<2> cg_of(const VelocityField<2>& f, GridShape<2> shape, double a, double b, const Domain<2>& box,
                 double aux = 0.0) {
  IntegratorParams p;
  p.rel_tol = 1e-12;
  p.abs_tol = 1e-14;
  if (aux <= 0) aux = 1e-6 * box.min_extent();
  return cauchy_green<2>(compute_flow_map<2>(f, shape, a, b, p, {aux, 0}, box));
}

}  // namespace

TEST_CASE("eig_sym") {
  SUBCASE("identity is degenerate") {
    const auto e = eig_sym<2>(Mat2::Identity());
    CHECK(e.values == Vec2(1, 1));
    CHECK(e.degenerate);
    CHECK((e.vectors.transpose() * e.vectors - Mat2::Identity()).norm() < 1e-14);
    CHECK(eig_sym<3>(Mat3::Identity()).degenerate);
  }
  SUBCASE("diagonal") {
    const auto e = eig_sym<2>(Vec2(1, 4).asDiagonal().toDenseMatrix());
    CHECK(e.values.isApprox(Vec2(1, 4)));
    CHECK(e.vectors.col(0).isApprox(Vec2(1, 0)));
    CHECK(e.vectors.col(1).isApprox(Vec2(0, 1)));
    CHECK_FALSE(e.degenerate);
  }
  SUBCASE("random SPD reconstructions") {
    std::mt19937_64 rng(99);
    double worst_rec = 0.0, worst_orth = 0.0, worst_val = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Mat3 R = oracle::random_matrix(rng, 3, 1.0);
      const Mat3 C = R.transpose() * R + 1e-3 * Mat3::Identity();
      const auto e = eig_sym<3>(C);
      Mat3 rec = Mat3::Zero();
      for (int k = 0; k < 3; ++k) rec += e.values[k] * e.vectors.col(k) * e.vectors.col(k).transpose();
      worst_rec = std::max(worst_rec, (C - rec).cwiseAbs().maxCoeff());
      worst_orth = std::max(worst_orth, (e.vectors.transpose() * e.vectors - Mat3::Identity()).cwiseAbs().maxCoeff());
      const Eigen::VectorXd ref = oracle::jacobi_eigenvalues(C);
      worst_val = std::max(worst_val, (e.values - Vec3(ref)).cwiseAbs().maxCoeff() / ref.maxCoeff());
      CHECK(e.values[0] <= e.values[1]);
      CHECK(e.values[1] <= e.values[2]);
      for (int k = 0; k < 3; ++k) CHECK(canonical_sign<3>(e.vectors.col(k)) == Vec3(e.vectors.col(k)));
    }
    CHECK(worst_rec < 1e-10);
    CHECK(worst_orth < 1e-10);
    CHECK(worst_val < 1e-12);
  }
  SUBCASE("random 2x2 against the quadratic formula") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 200; ++trial) {
      const double a = u(rng), b = u(rng), d = u(rng);
      Mat2 C;
      C << a, b, b, d;
      const auto e = eig_sym<2>(C);
      const auto ref = oracle::sym2_eigenvalues(a, b, d);
      CHECK(std::abs(e.values[0] - ref[0]) < 1e-13);
      CHECK(std::abs(e.values[1] - ref[1]) < 1e-13);
      CHECK((C * e.vectors.col(1) - e.values[1] * e.vectors.col(1)).norm() < 1e-12);
    }
  }
}

TEST_CASE("cauchy_green") {
  SUBCASE("zero flow") {
    const auto f = testing::zero_field_2d();
    const auto cg = cg_of(*f, {6, 6}, 0.0, 1.0, f->domain());
    for (std::size_t i = 0; i < cg.size(); ++i) {
      CHECK(cg.valid[i]);
      CHECK(cg.degenerate[i]);
      CHECK((cg.C[i] - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-9);
    }
    for (double v : ftle<2>(cg)) CHECK(std::abs(v) < 1e-9);
    const auto sing = detect_singularities(cg, 1e-2);
    CHECK_FALSE(sing.points.empty());
    // Every cell reports a singular point inside it.
    const Vec2 h = cg.spacing();
    for (int i = 0; i + 1 < 6; ++i)
      for (int j = 0; j + 1 < 6; ++j) {
        const Vec2 lo = cg.lower + Vec2((i + 0.5) * h[0], (j + 0.5) * h[1]);
        bool found = false;
        for (const auto& p : sing.points)
          found = found || ((p - lo).array() >= -1e-12).all() && ((p - lo - h).array() <= 1e-12).all();
        CHECK(found);
      }
  }
  SUBCASE("linear saddle") {
    const auto f = testing::linear_saddle(1.0);
    const auto cg = cg_of(*f, {9, 9}, 0.0, 1.0, Domain<2>(Vec2(-0.3, -0.3), Vec2(0.3, 0.3)), 1e-4);
    const auto ft = ftle<2>(cg);
    for (std::size_t i = 0; i < cg.size(); ++i) {
      CHECK(cg.lambdas[i][0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-7));
      CHECK(cg.lambdas[i][1] == doctest::Approx(std::exp(2.0)).epsilon(1e-7));
      CHECK(std::abs(std::abs(cg.xis[i](0, 1)) - 1.0) < 1e-10);
      CHECK(ft[i] == doctest::Approx(1.0).epsilon(1e-7));
      CHECK_FALSE(cg.degenerate[i]);
    }
    CHECK(detect_singularities(cg, 1e-2).points.empty());
  }
  SUBCASE("duffing at the origin") {
    const auto f = make_duffing();
    const auto cg = cg_of(*f, {21, 21}, 0.0, 2.0, Domain<2>(Vec2(-1, -1), Vec2(1, 1)));
    const std::size_t centre = flat_index<2>(cg.shape, {10, 10});
    REQUIRE(cg.node_position(centre).norm() < 1e-12);
    const Vec2 lam = cg.lambdas[centre];
    CHECK(lam[1] >= std::exp(8.0) * 0.5);
    CHECK(lam[1] <= std::exp(8.0) * 2.0);
    CHECK(std::abs(lam[0] * lam[1] - 1.0) < 1e-3);
    Eigen::MatrixXd A(2, 2);
    A << 0, 1, 4, 0;
    const Eigen::MatrixXd G = oracle::expm(2.0 * A);
    const Eigen::MatrixXd C = G.transpose() * G;
    const auto ref = oracle::sym2_eigenvalues(C(0, 0), C(0, 1), C(1, 1));
    CHECK(lam[1] == doctest::Approx(ref[1]).epsilon(1e-6));
    // FTLE is non-negative at the origin and peaks on the stable manifold.
    const auto ft = ftle<2>(cg);
    CHECK(ft[centre] >= 0.0);
    const double cell = cg.spacing()[1];
    for (std::size_t i = 6; i <= 14; ++i) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < 21; ++j)
        if (ft[flat_index<2>(cg.shape, {i, j})] > ft[flat_index<2>(cg.shape, {i, best})]) best = j;
      const Vec2 x = cg.node_position(flat_index<2>(cg.shape, {i, best}));
      const double ridge = -x[0] * std::sqrt(4.0 - 0.5 * x[0] * x[0]);
      CHECK(std::abs(x[1] - ridge) <= 1.5 * cell);
    }
  }
  SUBCASE("incompressible 2D flows have unit determinant") {
    const auto gyre = make_double_gyre();
    const auto cg = cg_of(*gyre, {40, 20}, 0.0, 10.0, gyre->domain());
    for (std::size_t i = 0; i < cg.size(); ++i) {
      REQUIRE(cg.valid[i]);
      CHECK(std::abs(cg.lambdas[i][0] * cg.lambdas[i][1] - 1.0) < 1e-3);
      CHECK(cg.lambdas[i][0] > 0.0);
      CHECK((cg.C[i] - cg.C[i].transpose()).norm() < 1e-12);
      Mat2 rec = Mat2::Zero();
      for (int k = 0; k < 2; ++k) rec += cg.lambdas[i][k] * cg.xis[i].col(k) * cg.xis[i].col(k).transpose();
      CHECK((rec - cg.C[i]).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, cg.lambdas[i][1]));
    }
  }
  SUBCASE("backward field") {
    const auto gyre = make_double_gyre();
    const auto cg = cauchy_green<2>(compute_flow_map<2>(*gyre, {10, 5}, 10.0, 0.0, IntegratorParams{}));
    CHECK(cg.a == 10.0);
    CHECK(cg.b == 0.0);
    for (double v : ftle<2>(cg)) CHECK(v >= -1e-9);
  }
  SUBCASE("double gyre singularities satisfy the criterion") {
    const auto gyre = make_double_gyre();
    const auto cg = cauchy_green<2>(compute_flow_map<2>(*gyre, {100, 50}, 0.0, 10.0, IntegratorParams{}));
    const double threshold = 5e-2;
    const auto sing = detect_singularities(cg, threshold);
    CHECK_FALSE(sing.points.empty());
    for (const auto& p : sing.points) CHECK(interpolate_anisotropy<2>(cg, p) < threshold);
  }
  SUBCASE("serial reference is bit-identical") {
    const auto gyre = make_double_gyre();
    const auto fm = compute_flow_map<2>(*gyre, {20, 10}, 0.0, 10.0, IntegratorParams{});
    const auto par = cauchy_green<2>(fm, kDefaultDegeneracy, 4);
    const auto ser = serial::cauchy_green<2>(fm);
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par.C[i] == ser.C[i]);
      CHECK(par.xis[i] == ser.xis[i]);
      CHECK(par.lambdas[i] == ser.lambdas[i]);
    }
  }
}

TEST_CASE("interpolate_eigvec") {
  const Vec2 lo(-1, -1), hi(1, 1);
  SUBCASE("constant field") {
    Mat2 C;
    C << 3, 1, 1, 2;
    const auto cg = testing::cg_from_tensor({5, 5}, lo, hi, [&](const Vec2&) { return C; });
    const Vec2 v = eig_sym<2>(C).vectors.col(1);
    for (auto mode : {EigvecInterp::NodeVectors, EigvecInterp::Tensor}) {
      const Vec2 got = interpolate_eigvec<2>(cg, Vec2(0.13, -0.4), 1, v, mode);
      CHECK((got - v).norm() < 1e-14);
      CHECK((interpolate_eigvec<2>(cg, Vec2(0.13, -0.4), 1, -v, mode) + v).norm() < 1e-14);
    }
  }
  SUBCASE("alternating node signs are aligned, not cancelled") {
    auto cg = testing::cg_from_tensor({4, 4}, lo, hi, [](const Vec2&) { return Vec2(1, 5).asDiagonal().toDenseMatrix(); });
    for (std::size_t i = 0; i < cg.size(); ++i)
      if (i % 2) cg.xis[i] = -cg.xis[i];
    const Vec2 got = interpolate_eigvec<2>(cg, Vec2(0.01, 0.02), 1, Vec2(0.1, 1.0));
    CHECK((got - Vec2(0, 1)).norm() < 1e-14);
  }
  SUBCASE("linear saddle matches the analytic direction") {
    const auto f = testing::linear_saddle(1.0, 3.0);
    const auto cg = cg_of(*f, {11, 11}, 0.0, 1.0, Domain<2>(Vec2(-0.5, -0.5), Vec2(0.5, 0.5)), 1e-4);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int i = 0; i < 30; ++i) {
      const Vec2 got = interpolate_eigvec<2>(cg, Vec2(u(rng), u(rng)), 1, Vec2(1, 0.1));
      CHECK(std::acos(std::min(1.0, got.dot(Vec2(1, 0)))) < 1e-3);
    }
  }
  SUBCASE("degenerate and outside queries") {
    auto cg = testing::cg_from_tensor({4, 4}, lo, hi, [](const Vec2&) { return Vec2(1, 5).asDiagonal().toDenseMatrix(); });
    CHECK_ERROR_KIND(interpolate_eigvec<2>(cg, Vec2(0.99, 0.0), 1, Vec2(0, 1)), ErrorKind::OutOfDomain);
    cg.degenerate[flat_index<2>(cg.shape, {1, 1})] = 1;
    CHECK_ERROR_KIND(interpolate_eigvec<2>(cg, Vec2(-0.3, -0.3), 1, Vec2(0, 1)), ErrorKind::Degenerate);
    cg.valid[flat_index<2>(cg.shape, {2, 2})] = 0;
    CHECK_ERROR_KIND(interpolate_lambda<2>(cg, Vec2(0.2, 0.2), 1), ErrorKind::PartialData);
  }
}

TEST_CASE("CGF1 round trip") {
  testing::TempDir dir("cgf");
  const auto gyre = make_double_gyre();
  const auto cg = cauchy_green<2>(compute_flow_map<2>(*gyre, {12, 6}, 0.0, 5.0, IntegratorParams{}));
  save_cg<2>(cg, dir / "c.cgf");
  CHECK(cg_dimension(dir / "c.cgf") == 2);
  const auto back = load_cg<2>(dir / "c.cgf");
  CHECK(back.shape == cg.shape);
  CHECK(back.valid == cg.valid);
  CHECK(back.degenerate == cg.degenerate);
  for (std::size_t i = 0; i < cg.size(); ++i) {
    CHECK(back.C[i] == cg.C[i]);
    CHECK(back.lambdas[i] == cg.lambdas[i]);
    CHECK(back.xis[i] == cg.xis[i]);
  }
  // A flow map is not a tensor file.
  save_flow_map<2>(compute_flow_map<2>(*gyre, {4, 4}, 0.0, 1.0, IntegratorParams{}), dir / "f.fmg");
  CHECK_ERROR_KIND(load_cg<2>(dir / "f.fmg"), ErrorKind::Format);
}
