#pragma once

// Reference computations kept independent of the library code they check.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

/// exp(M) by scaling and squaring with a truncated Taylor series.
inline MatX expm(const MatX& M) {
  const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = int(std::ceil(std::log2(norm / 0.5)));
  const MatX A = M / std::ldexp(1.0, squarings);
  MatX result = MatX::Identity(M.rows(), M.cols());
  MatX term = result;
  for (int k = 1; k <= 30; ++k) {
    term = term * A / double(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
inline std::array<double, 2> sym2_eigenvalues(double a, double b, double d) {
  const double mean = 0.5 * (a + d), r = std::hypot(0.5 * (a - d), b);
  return {mean - r, mean + r};
}

using Rhs = std::function<VecX(const VecX&, double)>;

/// Classic fixed-step RK4 written out independently of the library.
inline VecX rk4(const Rhs& f, VecX x, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const VecX k1 = f(x, t);
    const VecX k2 = f(x + 0.5 * h * k1, t + 0.5 * h);
    const VecX k3 = f(x + 0.5 * h * k2, t + 0.5 * h);
    const VecX k4 = f(x + h * k3, t + h);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

/// Fourth-order Richardson extrapolation of RK4 runs at n and 2n steps.
inline VecX richardson_rk4(const Rhs& f, const VecX& x0, double t0, double t1, int steps) {
  const VecX coarse = rk4(f, x0, t0, t1, steps);
  const VecX fine = rk4(f, x0, t0, t1, 2 * steps);
  return fine + (fine - coarse) / 15.0;
}

inline VecX duffing_rhs(const VecX& x, double) {
  VecX v(2);
  v << x[1], 4.0 * x[0] - x[0] * x[0] * x[0];
  return v;
}

/// H = 0 level set of the Duffing oscillator: x2 = s * x1 * sqrt(4 - x1^2 / 2).
/// s = -1 gives the stable manifold of the origin, s = +1 the unstable one.
/// Sampled densely for x1 in [-x1_max, x1_max].
inline std::vector<Eigen::Vector2d> duffing_homoclinic_branch(double s, double x1_max, int n) {
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i <= n; ++i) {
    const double x1 = -x1_max + 2.0 * x1_max * i / n;
    pts.emplace_back(x1, s * x1 * std::sqrt(std::max(0.0, 4.0 - 0.5 * x1 * x1)));
  }
  return pts;
}

/// Double-gyre velocity from hand-differentiated stream function.
inline Eigen::Vector2d double_gyre(const Eigen::Vector2d& x, double t, double A, double eps, double omega) {
  const double pi = 3.14159265358979323846;
  const double s = std::sin(omega * t);
  const double f = eps * s * x[0] * x[0] + (1.0 - 2.0 * eps * s) * x[0];
  const double dfdx = 2.0 * eps * s * x[0] + 1.0 - 2.0 * eps * s;
  return {-pi * A * std::sin(pi * f) * std::cos(pi * x[1]), pi * A * std::cos(pi * f) * std::sin(pi * x[1]) * dfdx};
}

/// Random matrix with entries uniform in [-scale, scale].
inline MatX random_matrix(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  MatX M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = u(rng);
  return M;
}

/// Symmetric eigenvalues by cyclic Jacobi rotations, ascending.
inline VecX jacobi_eigenvalues(MatX A) {
  const int n = int(A.rows());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-30 * A.squaredNorm()) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  VecX d = A.diagonal();
  std::sort(d.data(), d.data() + n);
  return d;
}

}  // namespace oracle
