#include "lcs/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lcs {

void CheckStats::add(double value) {
  ++count;
  sum_ += value;
  max = std::max(max, value);
  if (value < tol) ++passed;
}

void CheckStats::finish() { mean = count ? sum_ / double(count) : 0.0; }

namespace {

template <int Dim>
Vec<Dim> random_point(std::mt19937_64& rng, const Domain<Dim>& box) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec<Dim> x;
  for (int d = 0; d < Dim; ++d) x[d] = box.lower[d] + unit(rng) * (box.upper[d] - box.lower[d]);
  return x;
}

template <int Dim>
Mat<Dim> cauchy_green_of(const Mat<Dim>& G) {
  const Mat<Dim> C = G.transpose() * G;
  return 0.5 * (C + C.transpose());
}

}  // namespace

template <int Dim>
Lemma1Report verify_lemma1(const VelocityField<Dim>& field, double a, double b, const Lemma1Params& params,
                           const std::optional<Domain<Dim>>& box_opt) {
  if (a == b) throw Error(ErrorKind::InvalidArgument, "verification interval is empty");
  const Domain<Dim> box = box_opt.value_or(field.domain());
  const double aux = params.aux_offset > 0 ? params.aux_offset : 1e-6 * box.min_extent();
  Lemma1Report report;
  report.top.tol = params.tol;
  report.bottom.tol = params.tol;
  std::mt19937_64 rng(params.seed);
  const std::size_t max_attempts = params.n_seeds * params.max_attempts_factor;
  for (std::size_t attempt = 0; attempt < max_attempts && report.top.count < params.n_seeds; ++attempt) {
    const Vec<Dim> xa = random_point<Dim>(rng, box);
    try {
      const auto fwd = point_flow<Dim>(field, xa, a, b, aux, params.integrator);
      const auto bwd = point_flow<Dim>(field, fwd.final, b, a, aux, params.integrator);
      const auto ef = eig_sym<Dim>(cauchy_green_of<Dim>(fwd.gradient));
      const auto eb = eig_sym<Dim>(cauchy_green_of<Dim>(bwd.gradient));
      report.top.add(std::abs(ef.values[Dim - 1] * eb.values[0] - 1.0));
      report.bottom.add(std::abs(ef.values[0] * eb.values[Dim - 1] - 1.0));
    } catch (const Error&) {
      ++report.excluded;
    }
  }
  report.top.finish();
  report.bottom.finish();
  return report;
}

template Lemma1Report verify_lemma1<2>(const VelocityField<2>&, double, double, const Lemma1Params&,
                                       const std::optional<Domain<2>>&);
template Lemma1Report verify_lemma1<3>(const VelocityField<3>&, double, double, const Lemma1Params&,
                                       const std::optional<Domain<3>>&);

namespace {

struct Sample {
  Vec2 xb = Vec2::Zero();
  Vec2 tangent = Vec2::Zero();  // pushed-forward tangent at xb
  bool escaped = false;
};

std::vector<EigenLine> trace_random_lines(const CGField<2>& cg, LineKind kind, const Theorem1Params& params,
                                          const Domain<2>& box, std::mt19937_64& rng) {
  std::vector<EigenLine> lines;
  const std::size_t max_attempts = 50 * std::max<std::size_t>(params.n_lines, 1);
  for (std::size_t attempt = 0; attempt < max_attempts && lines.size() < params.n_lines; ++attempt) {
    const Vec2 seed = random_point<2>(rng, box);
    try {
      EigenLine line = trace_eigenline(cg, seed, kind, params.trace);
      if (line.points.size() >= 2) lines.push_back(std::move(line));
    } catch (const Error&) {
    }
  }
  return lines;
}

std::vector<Vec2> sample_vertices(const EigenLine& line, std::size_t count) {
  std::vector<Vec2> out;
  const std::size_t n = line.points.size();
  if (count >= n) return line.points;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t idx = count == 1 ? n / 2 : (i * (n - 1)) / (count - 1);
    out.push_back(line.points[idx]);
  }
  return out;
}

}  // namespace

Theorem1Report verify_theorem1(const VelocityField<2>& field, double a, double b, const Theorem1Params& params,
                               const std::optional<Domain<2>>& box_opt) {
  if (a == b) throw Error(ErrorKind::InvalidArgument, "verification interval is empty");
  const Domain<2> box = box_opt.value_or(field.domain());
  const double aux = params.aux_offset > 0 ? params.aux_offset : 1e-6 * box.min_extent();
  const int nt = params.threads > 0 ? params.threads : omp_get_max_threads();

  FlowMapOptions fopts;
  fopts.threads = params.threads;
  const auto fm_f = compute_flow_map<2>(field, params.forward_grid, a, b, params.integrator, fopts, box);
  const auto cg_f = cauchy_green<2>(fm_f, kDefaultDegeneracy, params.threads);

  std::mt19937_64 rng(params.seed);
  Theorem1Report report;
  report.required_fraction = params.required_fraction;
  report.strain.kind = LineKind::Strainline;
  report.stretch.kind = LineKind::Stretchline;

  // Map every sample to t = b with its pointwise gradient.
  std::vector<Sample> samples[2];
  for (int kind_index = 0; kind_index < 2; ++kind_index) {
    const LineKind kind = kind_index == 0 ? LineKind::Strainline : LineKind::Stretchline;
    const auto lines = trace_random_lines(cg_f, kind, params, box, rng);
    (kind_index == 0 ? report.strain : report.stretch).lines = lines.size();
    std::vector<Vec2> points;
    for (const auto& line : lines) {
      const auto picked = sample_vertices(line, params.samples_per_line);
      points.insert(points.end(), picked.begin(), picked.end());
    }
    auto& out = samples[kind_index];
    out.resize(points.size());
    const int k = eigen_index(kind);
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        const auto flow = point_flow<2>(field, points[i], a, b, aux, params.integrator);
        const auto eig = eig_sym<2>(cauchy_green_of<2>(flow.gradient));
        out[i].xb = flow.final;
        out[i].tangent = flow.gradient * eig.vectors.col(k);
      } catch (const Error&) {
        out[i].escaped = true;
      }
    }
  }

  // Backward tensor over the bounding box of the images.
  Domain<2> bbox = field.domain();
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const auto& set : samples)
    for (const auto& s : set)
      if (!s.escaped) {
        lo = lo.cwiseMin(s.xb);
        hi = hi.cwiseMax(s.xb);
      }
  if (lo.allFinite() && hi.allFinite()) {
    const Vec2 margin = (0.05 * (hi - lo)).cwiseMax(0.01 * field.domain().extent());
    const Domain<2> dom = field.domain();
    for (int d = 0; d < 2; ++d) {
      if (dom.periodic[d]) continue;
      bbox.lower[d] = std::max(dom.lower[d], lo[d] - margin[d]);
      bbox.upper[d] = std::min(dom.upper[d], hi[d] + margin[d]);
    }
  }
  const auto fm_b = compute_flow_map<2>(field, params.backward_grid, b, a, params.integrator, fopts, bbox);
  const auto cg_b = cauchy_green<2>(fm_b, kDefaultDegeneracy, params.threads);
  const auto sing = detect_singularities(cg_b, params.degeneracy_threshold);
  const double r_sing = params.trace.sing_radius > 0 ? params.trace.sing_radius : cg_b.cell_diagonal();

  for (int kind_index = 0; kind_index < 2; ++kind_index) {
    auto& rep = kind_index == 0 ? report.strain : report.stretch;
    rep.alignment.tol = params.tol;
    // Strainline images are tangent to xi_n^b (normal to xi_1^b) and vice versa.
    const int check = kind_index == 0 ? 0 : 1;
    for (const auto& s : samples[kind_index]) {
      if (s.escaped || !s.tangent.allFinite() || s.tangent.norm() == 0.0) {
        ++rep.excluded_escape;
        continue;
      }
      const double aniso = interpolate_anisotropy<2>(cg_b, s.xb);
      const bool near_sing = std::any_of(sing.points.begin(), sing.points.end(),
                                         [&](const Vec2& p) { return (p - s.xb).norm() < r_sing; });
      if (!(aniso >= params.degeneracy_threshold) || near_sing) {
        ++rep.excluded_degenerate;
        continue;
      }
      try {
        const Vec2 xi = interpolate_eigvec<2>(cg_b, s.xb, check, s.tangent, params.backward_interp);
        rep.alignment.add(std::abs(s.tangent.normalized().dot(xi)));
      } catch (const Error&) {
        ++rep.excluded_degenerate;
      }
    }
    rep.alignment.finish();
  }
  return report;
}

}  // namespace lcs
