#include "lcs/cgtensor.hpp"

#include "cgtensor_common.hpp"
#include "lcs/binary_io.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcs {

template <int Dim>
Vec<Dim> CGField<Dim>::spacing() const {
  Vec<Dim> h;
  for (int d = 0; d < Dim; ++d) h[d] = (upper[d] - lower[d]) / double(shape[d]);
  return h;
}

template <int Dim>
Vec<Dim> CGField<Dim>::node_position(std::size_t node) const {
  const auto idx = unflatten<Dim>(shape, node);
  const Vec<Dim> h = spacing();
  Vec<Dim> x;
  for (int d = 0; d < Dim; ++d) x[d] = lower[d] + (double(idx[d]) + 0.5) * h[d];
  return x;
}

namespace detail {

template <int Dim>
CGField<Dim> prepare_cg(const FlowMapGrid<Dim>& fm, double eps_deg) {
  CGField<Dim> cg;
  cg.a = fm.a;
  cg.b = fm.b;
  cg.shape = fm.shape;
  cg.lower = fm.lower;
  cg.upper = fm.upper;
  cg.periodic = fm.periodic;
  cg.eps_deg = eps_deg;
  const std::size_t n = fm.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  cg.C.assign(n, Mat<Dim>::Constant(nan));
  cg.lambdas.assign(n, Vec<Dim>::Constant(nan));
  cg.xis.assign(n, Mat<Dim>::Constant(nan));
  cg.valid.assign(n, 0);
  cg.degenerate.assign(n, 0);
  return cg;
}

template <int Dim>
void fill_cg_node(const FlowMapGrid<Dim>& fm, CGField<Dim>& cg, std::size_t i) {
  if (!fm.ok(i)) return;
  const Mat<Dim> G = flow_gradient<Dim>(fm, i);
  if (!G.allFinite()) return;
  Mat<Dim> C = G.transpose() * G;
  C = 0.5 * (C + C.transpose()).eval();
  const auto eig = eig_sym<Dim>(C, cg.eps_deg);
  cg.C[i] = C;
  cg.lambdas[i] = eig.values;
  cg.xis[i] = eig.vectors;
  cg.valid[i] = eig.values[0] > 0 ? 1 : 0;
  cg.degenerate[i] = eig.degenerate ? 1 : 0;
}

}  // namespace detail

template <int Dim>
CGField<Dim> cauchy_green(const FlowMapGrid<Dim>& fm, double eps_deg, int threads) {
  auto cg = detail::prepare_cg<Dim>(fm, eps_deg);
  const auto n = static_cast<std::ptrdiff_t>(fm.size());
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
  for (std::ptrdiff_t i = 0; i < n; ++i) detail::fill_cg_node<Dim>(fm, cg, std::size_t(i));
  return cg;
}

template <int Dim>
std::optional<Stencil<Dim>> locate(const CGField<Dim>& cg, const Vec<Dim>& x) {
  const Vec<Dim> h = cg.spacing();
  std::array<std::size_t, Dim> i0{}, i1{};
  std::array<double, Dim> frac{};
  for (int d = 0; d < Dim; ++d) {
    if (!std::isfinite(x[d])) return std::nullopt;
    const double u = (x[d] - cg.lower[d]) / h[d] - 0.5;
    const auto n = static_cast<long>(cg.shape[d]);
    if (cg.periodic[d]) {
      const double base = std::floor(u);
      frac[d] = u - base;
      long b = static_cast<long>(base) % n;
      if (b < 0) b += n;
      i0[d] = std::size_t(b);
      i1[d] = std::size_t((b + 1) % n);
    } else {
      if (u < 0.0 || u > double(n - 1)) return std::nullopt;
      const long b = std::min(static_cast<long>(std::floor(u)), n - 2);
      frac[d] = u - double(b);
      i0[d] = std::size_t(b);
      i1[d] = std::size_t(b + 1);
    }
  }
  Stencil<Dim> s;
  for (unsigned corner = 0; corner < (1u << Dim); ++corner) {
    std::array<std::size_t, Dim> idx{};
    double w = 1.0;
    for (int d = 0; d < Dim; ++d) {
      const bool up = (corner >> d) & 1u;
      idx[d] = up ? i1[d] : i0[d];
      w *= up ? frac[d] : 1.0 - frac[d];
    }
    s.nodes[corner] = flat_index<Dim>(cg.shape, idx);
    s.weights[corner] = w;
  }
  return s;
}

template <int Dim>
Vec<Dim> interpolate_eigvec(const CGField<Dim>& cg, const Vec<Dim>& x, int k, const Vec<Dim>& ref_dir,
                            EigvecInterp mode) {
  const auto stencil = locate<Dim>(cg, x);
  if (!stencil) throw Error(ErrorKind::OutOfDomain, "position outside the tensor grid");
  for (std::size_t c = 0; c < stencil->nodes.size(); ++c)
    if (stencil->weights[c] > 0 && !cg.usable(stencil->nodes[c]))
      throw Error(ErrorKind::Degenerate, "invalid or degenerate node in interpolation stencil");

  Vec<Dim> v = Vec<Dim>::Zero();
  if (mode == EigvecInterp::NodeVectors) {
    // Orient the heaviest node by ref_dir and the rest by that node, so a
    // reference nearly normal to the field cannot split the stencil.
    std::size_t pivot = 0;
    for (std::size_t c = 1; c < stencil->nodes.size(); ++c)
      if (stencil->weights[c] > stencil->weights[pivot]) pivot = c;
    Vec<Dim> anchor = cg.xis[stencil->nodes[pivot]].col(k);
    if (anchor.dot(ref_dir) < 0) anchor = -anchor;
    for (std::size_t c = 0; c < stencil->nodes.size(); ++c) {
      const double w = stencil->weights[c];
      if (w == 0.0) continue;
      Vec<Dim> e = cg.xis[stencil->nodes[c]].col(k);
      if (e.dot(anchor) < 0) e = -e;
      v += w * e;
    }
    if (v.dot(ref_dir) < 0) v = -v;
  } else {
    Mat<Dim> C = Mat<Dim>::Zero();
    for (std::size_t c = 0; c < stencil->nodes.size(); ++c)
      if (stencil->weights[c] != 0.0) C += stencil->weights[c] * cg.C[stencil->nodes[c]];
    const auto eig = eig_sym<Dim>(C, cg.eps_deg);
    if (eig.degenerate) throw Error(ErrorKind::Degenerate, "interpolated tensor is degenerate");
    v = eig.vectors.col(k);
    if (v.dot(ref_dir) < 0) v = -v;
  }
  const double norm = v.norm();
  if (!(norm > 1e-12)) throw Error(ErrorKind::Degenerate, "eigenvector blend cancelled out");
  return v / norm;
}

template <int Dim>
double interpolate_lambda(const CGField<Dim>& cg, const Vec<Dim>& x, int k) {
  const auto stencil = locate<Dim>(cg, x);
  if (!stencil) throw Error(ErrorKind::PartialData, "position outside the tensor grid");
  double log_l = 0.0;
  for (std::size_t c = 0; c < stencil->nodes.size(); ++c) {
    const double w = stencil->weights[c];
    if (w == 0.0) continue;
    const std::size_t node = stencil->nodes[c];
    if (!cg.valid[node]) throw Error(ErrorKind::PartialData, "invalid node under the query point");
    log_l += w * std::log(cg.lambdas[node][k]);
  }
  return std::exp(log_l);
}

template <int Dim>
double anisotropy(const CGField<Dim>& cg, std::size_t node) {
  const Vec<Dim>& l = cg.lambdas[node];
  return (l[Dim - 1] - l[0]) / l[Dim - 1];
}

template <int Dim>
double interpolate_anisotropy(const CGField<Dim>& cg, const Vec<Dim>& x) {
  const auto stencil = locate<Dim>(cg, x);
  if (!stencil) return std::numeric_limits<double>::quiet_NaN();
  double g = 0.0;
  for (std::size_t c = 0; c < stencil->nodes.size(); ++c) {
    const double w = stencil->weights[c];
    if (w == 0.0) continue;
    if (!cg.valid[stencil->nodes[c]]) return std::numeric_limits<double>::quiet_NaN();
    g += w * anisotropy<Dim>(cg, stencil->nodes[c]);
  }
  return g;
}

namespace {

// Least-squares quadratic g ~ c0 + c1 u + c2 v + c3 u^2 + c4 uv + c5 v^2 over
// the nodes of a patch (node-index coordinates). Returns the stationary point
// if the fit is strictly convex.
std::optional<Vec2> convex_fit_minimum(const CGField<2>& cg, long i_lo, long i_hi, long j_lo, long j_hi) {
  Eigen::Matrix<double, Eigen::Dynamic, 6> A((i_hi - i_lo + 1) * (j_hi - j_lo + 1), 6);
  Eigen::VectorXd rhs(A.rows());
  long row = 0;
  for (long i = i_lo; i <= i_hi; ++i)
    for (long j = j_lo; j <= j_hi; ++j) {
      const std::size_t node = flat_index<2>(cg.shape, {std::size_t(i), std::size_t(j)});
      if (!cg.valid[node]) return std::nullopt;
      const double u = double(i), v = double(j);
      A.row(row) << 1.0, u, v, u * u, u * v, v * v;
      rhs[row] = anisotropy<2>(cg, node);
      ++row;
    }
  const Eigen::Matrix<double, 6, 1> c = A.colPivHouseholderQr().solve(rhs);
  Mat2 H;
  H << 2 * c[3], c[4], c[4], 2 * c[5];
  const double scale = std::max(1e-14, rhs.cwiseAbs().maxCoeff());
  if (!(H(0, 0) > 1e-10 * scale) || !(H.determinant() > 1e-20 * scale * scale)) return std::nullopt;
  const Vec2 stationary = H.ldlt().solve(-Vec2(c[1], c[2]));
  if (!stationary.allFinite()) return std::nullopt;
  return stationary;
}

}  // namespace

SingularitySet detect_singularities(const CGField<2>& cg, double threshold) {
  SingularitySet set;
  set.threshold = threshold;
  const long nx = long(cg.shape[0]), ny = long(cg.shape[1]);
  const Vec2 h = cg.spacing();
  auto to_position = [&](double u, double v) {
    return Vec2(cg.lower[0] + (u + 0.5) * h[0], cg.lower[1] + (v + 0.5) * h[1]);
  };

  for (long i = 0; i + 1 < nx; ++i) {
    for (long j = 0; j + 1 < ny; ++j) {
      bool all_valid = true;
      for (long di = 0; di < 2; ++di)
        for (long dj = 0; dj < 2; ++dj)
          all_valid = all_valid && cg.valid[flat_index<2>(cg.shape, {std::size_t(i + di), std::size_t(j + dj)})];
      if (!all_valid) continue;

      std::optional<Vec2> candidate;
      const auto fit = convex_fit_minimum(cg, std::max(0L, i - 1), std::min(nx - 1, i + 2), std::max(0L, j - 1),
                                          std::min(ny - 1, j + 2));
      if (fit && (*fit)[0] >= double(i) && (*fit)[0] <= double(i + 1) && (*fit)[1] >= double(j) &&
          (*fit)[1] <= double(j + 1))
        candidate = to_position((*fit)[0], (*fit)[1]);

      if (!candidate) {
        // Lowest of the cell centre and its corners; the centre wins ties.
        Vec2 best = to_position(i + 0.5, j + 0.5);
        double best_g = interpolate_anisotropy<2>(cg, best);
        for (long di = 0; di < 2; ++di)
          for (long dj = 0; dj < 2; ++dj) {
            const Vec2 p = to_position(double(i + di), double(j + dj));
            const double g = interpolate_anisotropy<2>(cg, p);
            if (g < best_g) {
              best_g = g;
              best = p;
            }
          }
        candidate = best;
      }
      const double g = interpolate_anisotropy<2>(cg, *candidate);
      if (g < threshold) set.points.push_back(*candidate);
    }
  }

  // Corner candidates are shared by up to four cells.
  std::sort(set.points.begin(), set.points.end(), [](const Vec2& p, const Vec2& q) {
    return p[0] < q[0] || (p[0] == q[0] && p[1] < q[1]);
  });
  set.points.erase(std::unique(set.points.begin(), set.points.end(),
                               [](const Vec2& p, const Vec2& q) { return p == q; }),
                   set.points.end());
  return set;
}

template <int Dim>
std::vector<double> ftle(const CGField<Dim>& cg) {
  std::vector<double> out(cg.size(), std::numeric_limits<double>::quiet_NaN());
  const double span = std::abs(cg.b - cg.a);
  for (std::size_t i = 0; i < cg.size(); ++i)
    if (cg.valid[i]) out[i] = std::log(cg.lambdas[i][Dim - 1]) / (2.0 * span);
  return out;
}

template <int Dim>
void save_cg(const CGField<Dim>& cg, const std::filesystem::path& path) {
  io::json header;
  header["magic"] = "CGF1";
  header["n"] = Dim;
  header["grid_shape"] = std::vector<std::size_t>(cg.shape.begin(), cg.shape.end());
  header["a"] = cg.a;
  header["b"] = cg.b;
  header["lower"] = std::vector<double>(cg.lower.data(), cg.lower.data() + Dim);
  header["upper"] = std::vector<double>(cg.upper.data(), cg.upper.data() + Dim);
  header["periodic"] = std::vector<bool>(cg.periodic.begin(), cg.periodic.end());
  header["eps_deg"] = cg.eps_deg;
  std::vector<double> tri, lam, xi;
  for (std::size_t i = 0; i < cg.size(); ++i) {
    for (int r = 0; r < Dim; ++r)
      for (int c = r; c < Dim; ++c) tri.push_back(cg.C[i](r, c));
    for (int k = 0; k < Dim; ++k) lam.push_back(cg.lambdas[i][k]);
    for (int k = 0; k < Dim; ++k)
      for (int r = 0; r < Dim; ++r) xi.push_back(cg.xis[i](r, k));
  }
  auto out = io::open_for_write(path);
  io::write_header(out, header);
  io::write_f64(out, tri);
  io::write_f64(out, lam);
  io::write_f64(out, xi);
  io::write_bytes(out, io::pack_bits(cg.valid));
  io::write_bytes(out, io::pack_bits(cg.degenerate));
}

int cg_dimension(const std::filesystem::path& path) {
  auto in = io::open_for_read(path);
  return io::require<int>(io::read_header(in, "CGF1"), "n");
}

template <int Dim>
CGField<Dim> load_cg(const std::filesystem::path& path) {
  auto in = io::open_for_read(path);
  const auto header = io::read_header(in, "CGF1");
  if (io::require<int>(header, "n") != Dim) throw Error(ErrorKind::Format, "CGF1 dimension mismatch");
  CGField<Dim> cg;
  const auto shape = io::require<std::vector<std::size_t>>(header, "grid_shape");
  const auto lower = io::require<std::vector<double>>(header, "lower");
  const auto upper = io::require<std::vector<double>>(header, "upper");
  const auto periodic = io::require<std::vector<bool>>(header, "periodic");
  if (shape.size() != Dim || lower.size() != Dim || upper.size() != Dim || periodic.size() != Dim)
    throw Error(ErrorKind::Format, "CGF1 header arrays must have length n");
  for (int d = 0; d < Dim; ++d) {
    cg.shape[d] = shape[d];
    cg.lower[d] = lower[d];
    cg.upper[d] = upper[d];
    cg.periodic[d] = periodic[d];
  }
  cg.a = io::require<double>(header, "a");
  cg.b = io::require<double>(header, "b");
  cg.eps_deg = io::require<double>(header, "eps_deg");
  const std::size_t n = node_count<Dim>(cg.shape);
  constexpr std::size_t tri_size = Dim * (Dim + 1) / 2;
  const auto tri = io::read_f64(in, n * tri_size);
  const auto lam = io::read_f64(in, n * Dim);
  const auto xi = io::read_f64(in, n * Dim * Dim);
  cg.valid = io::unpack_bits(io::read_bytes(in, (n + 7) / 8), n);
  cg.degenerate = io::unpack_bits(io::read_bytes(in, (n + 7) / 8), n);
  io::expect_eof(in);
  cg.C.resize(n);
  cg.lambdas.resize(n);
  cg.xis.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t t = i * tri_size;
    for (int r = 0; r < Dim; ++r)
      for (int c = r; c < Dim; ++c) cg.C[i](r, c) = cg.C[i](c, r) = tri[t++];
    for (int k = 0; k < Dim; ++k) cg.lambdas[i][k] = lam[i * Dim + k];
    for (int k = 0; k < Dim; ++k)
      for (int r = 0; r < Dim; ++r) cg.xis[i](r, k) = xi[(i * Dim + k) * Dim + r];
  }
  return cg;
}

#define LCS_INSTANTIATE(D)                                                                                 \
  template struct CGField<D>;                                                                              \
  template CGField<D> detail::prepare_cg<D>(const FlowMapGrid<D>&, double);                                \
  template void detail::fill_cg_node<D>(const FlowMapGrid<D>&, CGField<D>&, std::size_t);                  \
  template CGField<D> cauchy_green<D>(const FlowMapGrid<D>&, double, int);                                 \
  template std::optional<Stencil<D>> locate<D>(const CGField<D>&, const Vec<D>&);                          \
  template Vec<D> interpolate_eigvec<D>(const CGField<D>&, const Vec<D>&, int, const Vec<D>&, EigvecInterp); \
  template double interpolate_lambda<D>(const CGField<D>&, const Vec<D>&, int);                            \
  template double anisotropy<D>(const CGField<D>&, std::size_t);                                           \
  template double interpolate_anisotropy<D>(const CGField<D>&, const Vec<D>&);                             \
  template std::vector<double> ftle<D>(const CGField<D>&);                                                 \
  template void save_cg<D>(const CGField<D>&, const std::filesystem::path&);                               \
  template CGField<D> load_cg<D>(const std::filesystem::path&);

LCS_INSTANTIATE(2)
LCS_INSTANTIATE(3)
#undef LCS_INSTANTIATE

}  // namespace lcs
