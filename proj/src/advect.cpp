#include "lcs/advect.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <optional>

namespace lcs {

template <int Dim>
std::size_t AdvectedCurve<Dim>::escaped_count() const {
  return std::size_t(std::count(escaped.begin(), escaped.end(), std::uint8_t{1}));
}

namespace {

template <int Dim>
std::optional<Vec<Dim>> try_advect(const VelocityField<Dim>& field, const Vec<Dim>& x, double t0, double t1,
                                   const IntegratorParams& params) {
  try {
    return integrate_trajectory<Dim>(field, x, t0, t1, params);
  } catch (const Error&) {
    // Escapes and integration failures are both reported through the mask.
    return std::nullopt;
  }
}

template <int Dim>
struct Inserted {
  Polyline<Dim> initial;
  Polyline<Dim> images;
  std::vector<std::uint8_t> escaped;
  bool saturated = false;
};

template <int Dim>
void refine(const VelocityField<Dim>& field, double t0, double t1, const IntegratorParams& params,
            const AdvectOptions& opt, double bound, const Vec<Dim>& pa, const Vec<Dim>& pb, const Vec<Dim>& ya,
            const Vec<Dim>& yb, int depth, Inserted<Dim>& out) {
  if ((yb - ya).norm() <= bound) return;
  if (depth >= opt.max_depth) {
    out.saturated = true;
    return;
  }
  const Vec<Dim> pm = 0.5 * (pa + pb);
  const auto ym = try_advect<Dim>(field, pm, t0, t1, params);
  if (!ym) {
    out.initial.push_back(pm);
    out.images.push_back(Vec<Dim>::Constant(std::numeric_limits<double>::quiet_NaN()));
    out.escaped.push_back(1);
    return;
  }
  refine<Dim>(field, t0, t1, params, opt, bound, pa, pm, ya, *ym, depth + 1, out);
  out.initial.push_back(pm);
  out.images.push_back(*ym);
  out.escaped.push_back(0);
  refine<Dim>(field, t0, t1, params, opt, bound, pm, pb, *ym, yb, depth + 1, out);
}

}  // namespace

template <int Dim>
std::vector<Vec<Dim>> advect_points(std::span<const Vec<Dim>> points, const VelocityField<Dim>& field, double t0,
                                    double t1, const IntegratorParams& params, int threads) {
  std::vector<Vec<Dim>> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(nt)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto y = try_advect<Dim>(field, points[i], t0, t1, params);
    out[i] = y ? *y : Vec<Dim>::Constant(std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

template <int Dim>
AdvectedCurve<Dim> advect_curve(std::span<const Vec<Dim>> line, const VelocityField<Dim>& field, double t0,
                                double t1, const IntegratorParams& params, const AdvectOptions& options) {
  params.validate();
  AdvectedCurve<Dim> out;
  if (line.empty()) return out;
  const auto images = advect_points<Dim>(line, field, t0, t1, params, options.threads);

  const std::size_t segments = line.size() - 1;
  std::vector<Inserted<Dim>> inserted(segments);
  if (options.refine) {
    const auto n = static_cast<std::ptrdiff_t>(segments);
    const int nt = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const Vec<Dim>& ya = images[i];
      const Vec<Dim>& yb = images[i + 1];
      if (!ya.allFinite() || !yb.allFinite()) continue;
      const double bound = options.refine_factor * (line[i + 1] - line[i]).norm();
      refine<Dim>(field, t0, t1, params, options, bound, line[i], line[i + 1], ya, yb, 0, inserted[i]);
    }
  }

  for (std::size_t i = 0; i < line.size(); ++i) {
    out.initial.push_back(line[i]);
    out.points.push_back(images[i]);
    out.escaped.push_back(images[i].allFinite() ? 0 : 1);
    if (i < segments) {
      const auto& ins = inserted[i];
      out.initial.insert(out.initial.end(), ins.initial.begin(), ins.initial.end());
      out.points.insert(out.points.end(), ins.images.begin(), ins.images.end());
      out.escaped.insert(out.escaped.end(), ins.escaped.begin(), ins.escaped.end());
      out.saturated = out.saturated || ins.saturated;
    }
  }
  return out;
}

template struct AdvectedCurve<2>;
template struct AdvectedCurve<3>;
template AdvectedCurve<2> advect_curve<2>(std::span<const Vec2>, const VelocityField<2>&, double, double,
                                          const IntegratorParams&, const AdvectOptions&);
template AdvectedCurve<3> advect_curve<3>(std::span<const Vec3>, const VelocityField<3>&, double, double,
                                          const IntegratorParams&, const AdvectOptions&);
template std::vector<Vec2> advect_points<2>(std::span<const Vec2>, const VelocityField<2>&, double, double,
                                            const IntegratorParams&, int);
template std::vector<Vec3> advect_points<3>(std::span<const Vec3>, const VelocityField<3>&, double, double,
                                            const IntegratorParams&, int);

}  // namespace lcs
