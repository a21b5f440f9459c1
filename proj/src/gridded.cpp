#include "lcs/gridded.hpp"

#include "lcs/binary_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcs {

namespace {

template <int Dim>
Vec<Dim> node_spacing(const Domain<Dim>& domain, const GridShape<Dim>& shape) {
  Vec<Dim> h;
  for (int d = 0; d < Dim; ++d) {
    const double cells = domain.periodic[d] ? double(shape[d]) : double(shape[d] - 1);
    h[d] = (domain.upper[d] - domain.lower[d]) / cells;
  }
  return h;
}

double time_lower(const std::vector<double>& times) {
  return times.size() == 1 ? -std::numeric_limits<double>::infinity() : times.front();
}

double time_upper(const std::vector<double>& times) {
  return times.size() == 1 ? std::numeric_limits<double>::infinity() : times.back();
}

void validate_times(const std::vector<double>& times) {
  if (times.empty()) throw Error(ErrorKind::Validation, "gridded velocity needs at least one time slice");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw Error(ErrorKind::Validation, "non-finite sample time");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw Error(ErrorKind::Validation, "sample times must be strictly increasing");
  }
}

}  // namespace

template <int Dim>
GriddedVelocity<Dim>::GriddedVelocity(Domain<Dim> domain, GridShape<Dim> space_shape,
                                      std::vector<double> times, std::vector<double> samples,
                                      std::string name)
    : VelocityField<Dim>((validate_times(times), domain), FieldKind::Gridded, std::move(name),
                         time_lower(times), time_upper(times)),
      shape_(space_shape),
      times_(std::move(times)),
      samples_(std::move(samples)) {
  for (int d = 0; d < Dim; ++d)
    if (shape_[d] < 2) throw Error(ErrorKind::Validation, "gridded velocity needs >= 2 nodes per axis");
  const std::size_t expected = times_.size() * node_count<Dim>(shape_) * Dim;
  if (samples_.size() != expected) throw Error(ErrorKind::Validation, "sample count does not match shape");
  for (double v : samples_)
    if (!std::isfinite(v)) throw Error(ErrorKind::Data, "non-finite velocity sample");
  spacing_ = node_spacing<Dim>(this->domain(), shape_);
}

template <int Dim>
Vec<Dim> GriddedVelocity<Dim>::node_position(const std::array<std::size_t, Dim>& idx) const {
  Vec<Dim> x;
  for (int d = 0; d < Dim; ++d) x[d] = this->domain().lower[d] + double(idx[d]) * spacing_[d];
  return x;
}

template <int Dim>
Vec<Dim> GriddedVelocity<Dim>::sample(std::size_t time_index, std::size_t node) const {
  const std::size_t base = (time_index * node_count<Dim>(shape_) + node) * Dim;
  Vec<Dim> v;
  for (int c = 0; c < Dim; ++c) v[c] = samples_[base + c];
  return v;
}

template <int Dim>
Vec<Dim> GriddedVelocity<Dim>::eval_slice(std::size_t time_index, const Vec<Dim>& x) const {
  const auto& domain = this->domain();
  std::array<std::size_t, Dim> i0{}, i1{};
  std::array<double, Dim> frac{};
  for (int d = 0; d < Dim; ++d) {
    const double u = (x[d] - domain.lower[d]) / spacing_[d];
    const auto n = static_cast<long>(shape_[d]);
    long base = static_cast<long>(std::floor(u));
    if (domain.periodic[d]) {
      frac[d] = u - double(base);
      base = ((base % n) + n) % n;
      i0[d] = std::size_t(base);
      i1[d] = std::size_t((base + 1) % n);
    } else {
      base = std::clamp(base, 0L, n - 2);
      frac[d] = u - double(base);
      i0[d] = std::size_t(base);
      i1[d] = std::size_t(base + 1);
    }
  }
  Vec<Dim> v = Vec<Dim>::Zero();
  for (unsigned corner = 0; corner < (1u << Dim); ++corner) {
    std::array<std::size_t, Dim> idx{};
    double w = 1.0;
    for (int d = 0; d < Dim; ++d) {
      const bool upper = (corner >> d) & 1u;
      idx[d] = upper ? i1[d] : i0[d];
      w *= upper ? frac[d] : 1.0 - frac[d];
    }
    if (w != 0.0) v += w * sample(time_index, flat_index<Dim>(shape_, idx));
  }
  return v;
}

template <int Dim>
Vec<Dim> GriddedVelocity<Dim>::evaluate(const Vec<Dim>& x, double t) const {
  if (times_.size() == 1) return eval_slice(0, x);
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = it == times_.begin() ? 0 : std::size_t(it - times_.begin()) - 1;
  k = std::min(k, times_.size() - 2);
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  if (w == 0.0) return eval_slice(k, x);
  if (w == 1.0) return eval_slice(k + 1, x);
  return (1.0 - w) * eval_slice(k, x) + w * eval_slice(k + 1, x);
}

template <int Dim>
std::shared_ptr<const GriddedVelocity<Dim>> sample_field(const VelocityField<Dim>& field,
                                                         GridShape<Dim> space_shape,
                                                         std::vector<double> times) {
  const auto& domain = field.domain();
  const Vec<Dim> h = node_spacing<Dim>(domain, space_shape);
  const std::size_t nodes = node_count<Dim>(space_shape);
  std::vector<double> samples(times.size() * nodes * Dim);
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    for (std::size_t node = 0; node < nodes; ++node) {
      const auto idx = unflatten<Dim>(space_shape, node);
      Vec<Dim> x;
      for (int d = 0; d < Dim; ++d) x[d] = domain.lower[d] + double(idx[d]) * h[d];
      // Guard the upper bound against round-off.
      for (int d = 0; d < Dim; ++d) x[d] = std::min(x[d], domain.upper[d]);
      const Vec<Dim> v = field.eval(x, times[ti]);
      for (int c = 0; c < Dim; ++c) samples[(ti * nodes + node) * Dim + c] = v[c];
    }
  }
  return std::make_shared<GriddedVelocity<Dim>>(domain, space_shape, std::move(times), std::move(samples),
                                                field.name() + "-sampled");
}

int gridded_dimension(const std::filesystem::path& path) {
  auto in = io::open_for_read(path);
  const auto header = io::read_header(in, "VGF1");
  return io::require<int>(header, "n");
}

template <int Dim>
std::shared_ptr<const GriddedVelocity<Dim>> load_gridded(const std::filesystem::path& path) {
  auto in = io::open_for_read(path);
  const auto header = io::read_header(in, "VGF1");
  if (io::require<int>(header, "n") != Dim) throw Error(ErrorKind::Format, "VGF1 dimension mismatch");
  const auto shape_v = io::require<std::vector<std::size_t>>(header, "space_shape");
  const auto lower_v = io::require<std::vector<double>>(header, "lower");
  const auto upper_v = io::require<std::vector<double>>(header, "upper");
  const auto periodic_v = io::require<std::vector<bool>>(header, "periodic");
  auto times = io::require<std::vector<double>>(header, "times");
  if (shape_v.size() != Dim || lower_v.size() != Dim || upper_v.size() != Dim || periodic_v.size() != Dim)
    throw Error(ErrorKind::Format, "VGF1 header arrays must have length n");

  GridShape<Dim> shape{};
  Domain<Dim> domain;
  for (int d = 0; d < Dim; ++d) {
    shape[d] = shape_v[d];
    domain.lower[d] = lower_v[d];
    domain.upper[d] = upper_v[d];
    domain.periodic[d] = periodic_v[d];
  }
  domain.validate();
  validate_times(times);
  for (auto n : shape)
    if (n < 2) throw Error(ErrorKind::Validation, "gridded velocity needs >= 2 nodes per axis");
  const std::size_t count = times.size() * node_count<Dim>(shape) * Dim;
  auto samples = io::read_f64(in, count);
  io::expect_eof(in);
  return std::make_shared<GriddedVelocity<Dim>>(domain, shape, std::move(times), std::move(samples),
                                                path.filename().string());
}

template <int Dim>
void save_gridded(const GriddedVelocity<Dim>& field, const std::filesystem::path& path) {
  const auto& domain = field.domain();
  io::json header;
  header["magic"] = "VGF1";
  header["n"] = Dim;
  header["space_shape"] = std::vector<std::size_t>(field.space_shape().begin(), field.space_shape().end());
  header["lower"] = std::vector<double>(domain.lower.data(), domain.lower.data() + Dim);
  header["upper"] = std::vector<double>(domain.upper.data(), domain.upper.data() + Dim);
  header["periodic"] = std::vector<bool>(domain.periodic.begin(), domain.periodic.end());
  header["times"] = field.times();
  auto out = io::open_for_write(path);
  io::write_header(out, header);
  io::write_f64(out, field.samples());
}

template class GriddedVelocity<2>;
template class GriddedVelocity<3>;
template std::shared_ptr<const GriddedVelocity<2>> sample_field<2>(const VelocityField<2>&, GridShape<2>,
                                                                   std::vector<double>);
template std::shared_ptr<const GriddedVelocity<3>> sample_field<3>(const VelocityField<3>&, GridShape<3>,
                                                                   std::vector<double>);
template std::shared_ptr<const GriddedVelocity<2>> load_gridded<2>(const std::filesystem::path&);
template std::shared_ptr<const GriddedVelocity<3>> load_gridded<3>(const std::filesystem::path&);
template void save_gridded<2>(const GriddedVelocity<2>&, const std::filesystem::path&);
template void save_gridded<3>(const GriddedVelocity<3>&, const std::filesystem::path&);

}  // namespace lcs
