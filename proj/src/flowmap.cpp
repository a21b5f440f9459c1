#include "lcs/flowmap.hpp"

#include "flowmap_common.hpp"
#include "lcs/binary_io.hpp"

#include <omp.h>

#include <cmath>
#include <limits>

namespace lcs {

const char* to_string(SeedStatus status) {
  switch (status) {
    case SeedStatus::Ok: return "ok";
    case SeedStatus::Escaped: return "escaped";
    case SeedStatus::Diverged: return "diverged";
    case SeedStatus::Failed: return "failed";
  }
  return "unknown";
}

template <int Dim>
Vec<Dim> FlowMapGrid<Dim>::spacing() const {
  Vec<Dim> h;
  for (int d = 0; d < Dim; ++d) h[d] = (upper[d] - lower[d]) / double(shape[d]);
  return h;
}

template <int Dim>
std::vector<Vec<Dim>> seed_grid(const GridShape<Dim>& shape, const Vec<Dim>& lower, const Vec<Dim>& upper) {
  const std::size_t total = node_count<Dim>(shape);
  std::vector<Vec<Dim>> seeds(total);
  for (std::size_t i = 0; i < total; ++i) {
    const auto idx = unflatten<Dim>(shape, i);
    for (int d = 0; d < Dim; ++d)
      seeds[i][d] = lower[d] + (double(idx[d]) + 0.5) * (upper[d] - lower[d]) / double(shape[d]);
  }
  return seeds;
}

template <int Dim>
double default_aux_offset(const Vec<Dim>& lower, const Vec<Dim>& upper) {
  return 1e-4 * (upper - lower).minCoeff();
}

namespace detail {

// Differencing displacements rather than positions keeps the identity exact
// for a resting flow.
template <int Dim>
Vec<Dim> stencil_column(const Vec<Dim>& x0, double offset, int d, const Vec<Dim>& plus, const Vec<Dim>& minus) {
  Vec<Dim> e = Vec<Dim>::Zero();
  e[d] = offset;
  const Vec<Dim> xp = x0 + e;
  const Vec<Dim> xm = x0 - e;
  Vec<Dim> col = ((plus - xp) - (minus - xm)) / (2.0 * offset);
  col[d] += 1.0;
  return col;
}

template <int Dim>
FlowMapGrid<Dim> prepare_flow_map(const VelocityField<Dim>& field, const GridShape<Dim>& shape, double a,
                                  double b, const IntegratorParams& params, const FlowMapOptions& options,
                                  const std::optional<Domain<Dim>>& box) {
  params.validate();
  if (a == b) throw Error(ErrorKind::InvalidArgument, "flow map interval must have a != b");
  for (auto n : shape)
    if (n < 3) throw Error(ErrorKind::InvalidArgument, "flow map grid needs >= 3 seeds per axis");

  const Domain<Dim>& domain = field.domain();
  FlowMapGrid<Dim> fm;
  fm.a = a;
  fm.b = b;
  fm.shape = shape;
  fm.lower = box ? box->lower : domain.lower;
  fm.upper = box ? box->upper : domain.upper;
  for (int d = 0; d < Dim; ++d) {
    if (!(fm.lower[d] < fm.upper[d])) throw Error(ErrorKind::InvalidArgument, "empty flow map box");
    fm.periodic[d] = domain.periodic[d] && fm.lower[d] == domain.lower[d] && fm.upper[d] == domain.upper[d];
  }
  fm.aux_offset = options.aux_offset > 0 ? options.aux_offset : default_aux_offset<Dim>(fm.lower, fm.upper);
  if (!(fm.aux_offset < 0.5 * fm.spacing().minCoeff()))
    throw Error(ErrorKind::InvalidArgument, "aux_offset must be below half the grid spacing");

  fm.seeds = seed_grid<Dim>(shape, fm.lower, fm.upper);
  const std::size_t n = fm.seeds.size();
  const Vec<Dim> nan = Vec<Dim>::Constant(std::numeric_limits<double>::quiet_NaN());
  fm.finals.assign(n, nan);
  fm.aux_finals.assign(n * 2 * Dim, nan);
  fm.status.assign(n, SeedStatus::Ok);
  return fm;
}

template <int Dim>
void integrate_seed(const VelocityField<Dim>& field, const IntegratorParams& params, FlowMapGrid<Dim>& fm,
                    std::size_t i) {
  const Vec<Dim>& x0 = fm.seeds[i];
  try {
    fm.finals[i] = integrate_trajectory<Dim>(field, x0, fm.a, fm.b, params);
    for (int d = 0; d < Dim; ++d) {
      Vec<Dim> offset = Vec<Dim>::Zero();
      offset[d] = fm.aux_offset;
      fm.aux_finals[i * 2 * Dim + 2 * d] = integrate_trajectory<Dim>(field, Vec<Dim>(x0 + offset), fm.a, fm.b, params);
      fm.aux_finals[i * 2 * Dim + 2 * d + 1] =
          integrate_trajectory<Dim>(field, Vec<Dim>(x0 - offset), fm.a, fm.b, params);
    }
  } catch (const EscapeError&) {
    fm.status[i] = SeedStatus::Escaped;
  } catch (const Error& e) {
    fm.status[i] = e.kind() == ErrorKind::Divergence ? SeedStatus::Diverged : SeedStatus::Failed;
  }
}

}  // namespace detail

template <int Dim>
FlowMapGrid<Dim> compute_flow_map(const VelocityField<Dim>& field, const GridShape<Dim>& shape, double a,
                                  double b, const IntegratorParams& params, const FlowMapOptions& options,
                                  const std::optional<Domain<Dim>>& box) {
  auto fm = detail::prepare_flow_map<Dim>(field, shape, a, b, params, options, box);
  const auto n = static_cast<std::ptrdiff_t>(fm.size());
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) detail::integrate_seed<Dim>(field, params, fm, std::size_t(i));
  return fm;
}

template <int Dim>
Mat<Dim> flow_gradient(const FlowMapGrid<Dim>& fm, std::size_t seed) {
  if (seed >= fm.size()) throw Error(ErrorKind::InvalidArgument, "seed index out of range");
  if (!fm.ok(seed))
    throw Error(ErrorKind::Unavailable, std::string("flow gradient unavailable: seed ") + to_string(fm.status[seed]));
  Mat<Dim> g;
  for (int d = 0; d < Dim; ++d)
    g.col(d) = detail::stencil_column<Dim>(fm.seeds[seed], fm.aux_offset, d, fm.aux_finals[seed * 2 * Dim + 2 * d],
                                          fm.aux_finals[seed * 2 * Dim + 2 * d + 1]);
  return g;
}

template <int Dim>
PointFlow<Dim> point_flow(const VelocityField<Dim>& field, const Vec<Dim>& x0, double a, double b,
                          double aux_offset, const IntegratorParams& params) {
  if (!(aux_offset > 0)) throw Error(ErrorKind::InvalidArgument, "aux_offset must be positive");
  PointFlow<Dim> out;
  out.start = x0;
  out.final = integrate_trajectory<Dim>(field, x0, a, b, params);
  for (int d = 0; d < Dim; ++d) {
    Vec<Dim> offset = Vec<Dim>::Zero();
    offset[d] = aux_offset;
    const Vec<Dim> plus = integrate_trajectory<Dim>(field, Vec<Dim>(x0 + offset), a, b, params);
    const Vec<Dim> minus = integrate_trajectory<Dim>(field, Vec<Dim>(x0 - offset), a, b, params);
    out.gradient.col(d) = detail::stencil_column<Dim>(x0, aux_offset, d, plus, minus);
  }
  return out;
}

namespace {

template <int Dim>
std::vector<double> flatten(const std::vector<Vec<Dim>>& points) {
  std::vector<double> flat;
  flat.reserve(points.size() * Dim);
  for (const auto& p : points)
    for (int d = 0; d < Dim; ++d) flat.push_back(p[d]);
  return flat;
}

template <int Dim>
std::vector<Vec<Dim>> unflatten_points(const std::vector<double>& flat) {
  std::vector<Vec<Dim>> points(flat.size() / Dim);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int d = 0; d < Dim; ++d) points[i][d] = flat[i * Dim + d];
  return points;
}

}  // namespace

template <int Dim>
void save_flow_map(const FlowMapGrid<Dim>& fm, const std::filesystem::path& path) {
  io::json header;
  header["magic"] = "FMG1";
  header["n"] = Dim;
  header["grid_shape"] = std::vector<std::size_t>(fm.shape.begin(), fm.shape.end());
  header["a"] = fm.a;
  header["b"] = fm.b;
  header["aux_offset"] = fm.aux_offset;
  header["lower"] = std::vector<double>(fm.lower.data(), fm.lower.data() + Dim);
  header["upper"] = std::vector<double>(fm.upper.data(), fm.upper.data() + Dim);
  header["periodic"] = std::vector<bool>(fm.periodic.begin(), fm.periodic.end());
  auto out = io::open_for_write(path);
  io::write_header(out, header);
  io::write_f64(out, flatten<Dim>(fm.seeds));
  io::write_f64(out, flatten<Dim>(fm.finals));
  io::write_f64(out, flatten<Dim>(fm.aux_finals));
  std::vector<std::uint8_t> status(fm.status.size());
  for (std::size_t i = 0; i < status.size(); ++i) status[i] = static_cast<std::uint8_t>(fm.status[i]);
  io::write_bytes(out, status);
}

int flow_map_dimension(const std::filesystem::path& path) {
  auto in = io::open_for_read(path);
  return io::require<int>(io::read_header(in, "FMG1"), "n");
}

template <int Dim>
FlowMapGrid<Dim> load_flow_map(const std::filesystem::path& path) {
  auto in = io::open_for_read(path);
  const auto header = io::read_header(in, "FMG1");
  if (io::require<int>(header, "n") != Dim) throw Error(ErrorKind::Format, "FMG1 dimension mismatch");
  FlowMapGrid<Dim> fm;
  const auto shape = io::require<std::vector<std::size_t>>(header, "grid_shape");
  const auto lower = io::require<std::vector<double>>(header, "lower");
  const auto upper = io::require<std::vector<double>>(header, "upper");
  if (shape.size() != Dim || lower.size() != Dim || upper.size() != Dim)
    throw Error(ErrorKind::Format, "FMG1 header arrays must have length n");
  std::vector<bool> periodic(Dim, false);
  if (header.contains("periodic")) periodic = io::require<std::vector<bool>>(header, "periodic");
  if (periodic.size() != Dim) throw Error(ErrorKind::Format, "FMG1 periodic array must have length n");
  for (int d = 0; d < Dim; ++d) {
    fm.shape[d] = shape[d];
    fm.lower[d] = lower[d];
    fm.upper[d] = upper[d];
    fm.periodic[d] = periodic[d];
  }
  fm.a = io::require<double>(header, "a");
  fm.b = io::require<double>(header, "b");
  fm.aux_offset = io::require<double>(header, "aux_offset");
  const std::size_t n = node_count<Dim>(fm.shape);
  fm.seeds = unflatten_points<Dim>(io::read_f64(in, n * Dim));
  fm.finals = unflatten_points<Dim>(io::read_f64(in, n * Dim));
  fm.aux_finals = unflatten_points<Dim>(io::read_f64(in, n * 2 * Dim * Dim));
  const auto status = io::read_bytes(in, n);
  io::expect_eof(in);
  fm.status.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (status[i] > 3) throw Error(ErrorKind::Format, "invalid seed status byte");
    fm.status[i] = static_cast<SeedStatus>(status[i]);
  }
  return fm;
}

#define LCS_INSTANTIATE(D)                                                                                   \
  template struct FlowMapGrid<D>;                                                                            \
  template std::vector<Vec<D>> seed_grid<D>(const GridShape<D>&, const Vec<D>&, const Vec<D>&);              \
  template double default_aux_offset<D>(const Vec<D>&, const Vec<D>&);                                      \
  template FlowMapGrid<D> detail::prepare_flow_map<D>(const VelocityField<D>&, const GridShape<D>&, double,  \
                                                      double, const IntegratorParams&, const FlowMapOptions&, \
                                                      const std::optional<Domain<D>>&);                      \
  template void detail::integrate_seed<D>(const VelocityField<D>&, const IntegratorParams&, FlowMapGrid<D>&, \
                                          std::size_t);                                                      \
  template FlowMapGrid<D> compute_flow_map<D>(const VelocityField<D>&, const GridShape<D>&, double, double,  \
                                              const IntegratorParams&, const FlowMapOptions&,                \
                                              const std::optional<Domain<D>>&);                              \
  template Mat<D> flow_gradient<D>(const FlowMapGrid<D>&, std::size_t);                                      \
  template PointFlow<D> point_flow<D>(const VelocityField<D>&, const Vec<D>&, double, double, double,       \
                                      const IntegratorParams&);                                              \
  template void save_flow_map<D>(const FlowMapGrid<D>&, const std::filesystem::path&);                       \
  template FlowMapGrid<D> load_flow_map<D>(const std::filesystem::path&);

LCS_INSTANTIATE(2)
LCS_INSTANTIATE(3)
#undef LCS_INSTANTIATE

}  // namespace lcs
