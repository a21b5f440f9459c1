#include "lcs/eigen_sym.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lcs {

template <int Dim>
Vec<Dim> canonical_sign(Vec<Dim> v) {
  for (int i = 0; i < Dim; ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return v;
}

namespace {

template <int Dim>
bool is_degenerate(const Vec<Dim>& l, double eps_deg) {
  for (int k = 0; k + 1 < Dim; ++k) {
    const double top = std::abs(l[k + 1]);
    if (top == 0.0 || (l[k + 1] - l[k]) / top < eps_deg) return true;
  }
  return false;
}

// Ascending eigenpairs of [[a, b], [b, c]]; the larger eigenvector is at
// angle theta = atan2(2b, a - c) / 2.
void eig2(double a, double b, double c, double& l1, double& l2, Vec2& v1, Vec2& v2) {
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  l2 = mean + radius;
  l1 = mean - radius;
  const double theta = 0.5 * std::atan2(2.0 * b, a - c);
  v2 = Vec2(std::cos(theta), std::sin(theta));
  v1 = Vec2(-std::sin(theta), std::cos(theta));
}

// Unit vector spanning the null space of (C - l I), from the largest cross
// product of its rows.
Vec3 null_vector(const Mat3& C, double l) {
  const Mat3 M = C - l * Mat3::Identity();
  const Vec3 r0 = M.row(0), r1 = M.row(1), r2 = M.row(2);
  const Vec3 c01 = r0.cross(r1), c02 = r0.cross(r2), c12 = r1.cross(r2);
  const double n01 = c01.squaredNorm(), n02 = c02.squaredNorm(), n12 = c12.squaredNorm();
  if (n01 >= n02 && n01 >= n12 && n01 > 0) return c01 / std::sqrt(n01);
  if (n02 >= n12 && n02 > 0) return c02 / std::sqrt(n02);
  if (n12 > 0) return c12 / std::sqrt(n12);
  return Vec3::UnitX();
}

// Orthonormal u, v completing w.
void complement(const Vec3& w, Vec3& u, Vec3& v) {
  if (std::abs(w[0]) > std::abs(w[1])) {
    u = Vec3(-w[2], 0.0, w[0]) / std::hypot(w[0], w[2]);
  } else {
    u = Vec3(0.0, w[2], -w[1]) / std::hypot(w[1], w[2]);
  }
  v = w.cross(u);
}

SymEigen<3> eig3(const Mat3& C, double eps_deg) {
  SymEigen<3> out;
  const double p1 = C(0, 1) * C(0, 1) + C(0, 2) * C(0, 2) + C(1, 2) * C(1, 2);
  const double q = C.trace() / 3.0;
  const double scale = std::max(C.cwiseAbs().maxCoeff(), 1e-300);

  if (p1 <= 1e-32 * scale * scale) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return C(i, i) < C(j, j); });
    for (int k = 0; k < 3; ++k) {
      out.values[k] = C(order[k], order[k]);
      out.vectors.col(k) = Vec3::Unit(order[k]);
    }
  } else {
    const double d0 = C(0, 0) - q, d1 = C(1, 1) - q, d2 = C(2, 2) - q;
    const double p = std::sqrt((d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1) / 6.0);
    const Mat3 B = (C - q * Mat3::Identity()) / p;
    const double r = std::clamp(0.5 * B.determinant(), -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double l3 = q + 2.0 * p * std::cos(phi);
    const double l1 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double l2 = 3.0 * q - l1 - l3;

    // Solve for the eigenvector of the better isolated end of the spectrum,
    // then diagonalise C restricted to its orthogonal complement.
    const bool top_isolated = (l3 - l2) >= (l2 - l1);
    const Vec3 w = null_vector(C, top_isolated ? l3 : l1);
    Vec3 u, v;
    complement(w, u, v);
    double m1, m2;
    Vec2 e1, e2;
    eig2(u.dot(C * u), u.dot(C * v), v.dot(C * v), m1, m2, e1, e2);
    const Vec3 f1 = (e1[0] * u + e1[1] * v).normalized();
    const Vec3 f2 = (e2[0] * u + e2[1] * v).normalized();
    const double lw = w.dot(C * w);
    if (top_isolated) {
      out.values = Vec3(m1, m2, lw);
      out.vectors.col(0) = f1;
      out.vectors.col(1) = f2;
      out.vectors.col(2) = w;
    } else {
      out.values = Vec3(lw, m1, m2);
      out.vectors.col(0) = w;
      out.vectors.col(1) = f1;
      out.vectors.col(2) = f2;
    }
    // Round-off can swap nearly equal values; restore ascending order.
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2 - i; ++k)
        if (out.values[k] > out.values[k + 1]) {
          std::swap(out.values[k], out.values[k + 1]);
          out.vectors.col(k).swap(out.vectors.col(k + 1));
        }
  }
  for (int k = 0; k < 3; ++k) out.vectors.col(k) = canonical_sign<3>(out.vectors.col(k));
  out.degenerate = is_degenerate<3>(out.values, eps_deg);
  return out;
}

}  // namespace

template <int Dim>
SymEigen<Dim> eig_sym(const Mat<Dim>& C, double eps_deg) {
  static_assert(Dim == 2 || Dim == 3, "closed-form eigensolver supports Dim 2 and 3");
  if constexpr (Dim == 2) {
    SymEigen<2> out;
    Vec2 v1, v2;
    double l1, l2;
    eig2(C(0, 0), 0.5 * (C(0, 1) + C(1, 0)), C(1, 1), l1, l2, v1, v2);
    out.values = Vec2(l1, l2);
    out.vectors.col(0) = canonical_sign<2>(v1);
    out.vectors.col(1) = canonical_sign<2>(v2);
    out.degenerate = is_degenerate<2>(out.values, eps_deg);
    return out;
  } else {
    return eig3(C, eps_deg);
  }
}

template SymEigen<2> eig_sym<2>(const Mat2&, double);
template SymEigen<3> eig_sym<3>(const Mat3&, double);
template Vec2 canonical_sign<2>(Vec2);
template Vec3 canonical_sign<3>(Vec3);

}  // namespace lcs
