#include "lcs/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lcs {

Method parse_method(const std::string& name) {
  if (name == "rk4" || name == "rk4_fixed") return Method::Rk4Fixed;
  if (name == "rk45" || name == "rk45_adaptive") return Method::Rk45Adaptive;
  throw Error(ErrorKind::InvalidArgument, "unknown integrator method: " + name);
}

const char* to_string(Method method) {
  return method == Method::Rk4Fixed ? "rk4_fixed" : "rk45_adaptive";
}

void IntegratorParams::validate() const {
  if (!(step > 0)) throw Error(ErrorKind::InvalidArgument, "integrator step must be positive");
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  if (max_steps == 0) throw Error(ErrorKind::InvalidArgument, "max_steps must be positive");
}

namespace {

// Converts out-of-domain evaluations into an escape at the current time.
template <int Dim>
Vec<Dim> rhs(const VelocityField<Dim>& field, const Vec<Dim>& x, double t, double t_last_inside) {
  try {
    return field.eval(x, t);
  } catch (const EscapeError&) {
    throw;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OutOfDomain) throw;
    throw EscapeError(t_last_inside, "trajectory escaped the domain near t = " + std::to_string(t_last_inside));
  }
}

template <int Dim>
void check_inside(const VelocityField<Dim>& field, const Vec<Dim>& x, double t_prev) {
  if (!field.domain().contains(x))
    throw EscapeError(t_prev, "trajectory escaped the domain after t = " + std::to_string(t_prev));
}

template <int Dim>
Vec<Dim> rk4_fixed(const VelocityField<Dim>& field, Vec<Dim> x, double t0, double t1,
                   const IntegratorParams& p) {
  const double span = t1 - t0;
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(span) / p.step - 1e-12));
  if (steps > p.max_steps) throw Error(ErrorKind::Divergence, "fixed-step count exceeds max_steps");
  const double h = span / double(std::max<std::size_t>(steps, 1));
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = t0 + double(i) * h;
    const Vec<Dim> k1 = rhs(field, x, t, t);
    const Vec<Dim> k2 = rhs(field, Vec<Dim>(x + 0.5 * h * k1), t + 0.5 * h, t);
    const Vec<Dim> k3 = rhs(field, Vec<Dim>(x + 0.5 * h * k2), t + 0.5 * h, t);
    const Vec<Dim> k4 = rhs(field, Vec<Dim>(x + h * k3), t + h, t);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw Error(ErrorKind::Divergence, "non-finite state in fixed-step integration");
    check_inside(field, x, t);
  }
  return x;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

template <int Dim>
double error_norm(const Vec<Dim>& err, const Vec<Dim>& y0, const Vec<Dim>& y1, const IntegratorParams& p) {
  double sum = 0.0;
  for (int i = 0; i < Dim; ++i) {
    const double scale = p.abs_tol + p.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / Dim);
}

template <int Dim>
double initial_step(const VelocityField<Dim>& field, const Vec<Dim>& x0, const Vec<Dim>& f0, double t0,
                    double span, const IntegratorParams& p) {
  Vec<Dim> scale;
  for (int i = 0; i < Dim; ++i) scale[i] = p.abs_tol + p.rel_tol * std::abs(x0[i]);
  const double d0 = x0.cwiseQuotient(scale).norm() / std::sqrt(double(Dim));
  const double d1 = f0.cwiseQuotient(scale).norm() / std::sqrt(double(Dim));
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, std::abs(span));
  const double dir = span > 0 ? 1.0 : -1.0;
  Vec<Dim> f1;
  try {
    f1 = field.eval(Vec<Dim>(x0 + dir * h0 * f0), t0 + dir * h0);
  } catch (const Error&) {
    return dir * std::min(h0, 1e-3 * std::abs(span));
  }
  const double d2 = (f1 - f0).cwiseQuotient(scale).norm() / std::sqrt(double(Dim)) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return dir * std::min({100.0 * h0, h1, std::abs(span)});
}

template <int Dim>
Vec<Dim> rk45_adaptive(const VelocityField<Dim>& field, Vec<Dim> x, double t0, double t1,
                       const IntegratorParams& p) {
  const double span = t1 - t0;
  const double dir = span > 0 ? 1.0 : -1.0;
  double t = t0;
  Vec<Dim> k1 = rhs(field, x, t, t);
  double h = initial_step(field, x, k1, t0, span, p);

  // PI controller (Hairer & Wanner, beta = 0.04).
  constexpr double safety = 0.9, beta = 0.04, alpha = 0.2 - 0.75 * beta;
  constexpr double min_factor = 0.2, max_factor = 5.0;
  double err_prev = 1e-4;
  bool rejected_last = false;

  for (std::size_t step = 0; step < p.max_steps; ++step) {
    if (dir * (t1 - t) <= 0) return x;
    bool last = false;
    if (dir * (t + h - t1) >= 0) {
      h = t1 - t;
      last = true;
    }
    if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw Error(ErrorKind::Divergence, "step size collapsed at t = " + std::to_string(t));

    const Vec<Dim> k2 = rhs(field, Vec<Dim>(x + h * a21 * k1), t + c2 * h, t);
    const Vec<Dim> k3 = rhs(field, Vec<Dim>(x + h * (a31 * k1 + a32 * k2)), t + c3 * h, t);
    const Vec<Dim> k4 = rhs(field, Vec<Dim>(x + h * (a41 * k1 + a42 * k2 + a43 * k3)), t + c4 * h, t);
    const Vec<Dim> k5 =
        rhs(field, Vec<Dim>(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)), t + c5 * h, t);
    const Vec<Dim> k6 =
        rhs(field, Vec<Dim>(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)), t + h, t);
    const Vec<Dim> x_new = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    if (!x_new.allFinite()) throw Error(ErrorKind::Divergence, "non-finite state in adaptive integration");
    const double t_new = last ? t1 : t + h;
    // The final stage is evaluated at the accepted point (FSAL).
    Vec<Dim> k7;
    try {
      k7 = field.eval(x_new, t_new);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OutOfDomain) throw;
      k7 = k6;  // only used for the error estimate; the escape is caught below
    }
    const Vec<Dim> err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm<Dim>(err, x, x_new, p);

    if (en <= 1.0) {
      check_inside(field, x_new, t);
      double factor = en == 0.0 ? max_factor
                                : safety * std::pow(en, -alpha) * std::pow(std::max(err_prev, 1e-4), beta);
      factor = std::clamp(factor, min_factor, rejected_last ? 1.0 : max_factor);
      err_prev = en;
      rejected_last = false;
      x = x_new;
      t = t_new;
      k1 = k7;
      if (last) return x;
      h *= factor;
    } else {
      const double factor = std::max(min_factor, safety * std::pow(en, -alpha));
      h *= factor;
      rejected_last = true;
    }
  }
  throw Error(ErrorKind::Divergence, "max_steps exceeded");
}

}  // namespace

template <int Dim>
Vec<Dim> integrate_trajectory(const VelocityField<Dim>& field, const Vec<Dim>& x0, double t0, double t1,
                              const IntegratorParams& params) {
  params.validate();
  if (!field.domain().contains(x0)) throw EscapeError(t0, "initial position outside the domain");
  if (t0 == t1) return x0;
  return params.method == Method::Rk4Fixed ? rk4_fixed<Dim>(field, x0, t0, t1, params)
                                           : rk45_adaptive<Dim>(field, x0, t0, t1, params);
}

template Vec2 integrate_trajectory<2>(const VelocityField<2>&, const Vec2&, double, double,
                                      const IntegratorParams&);
template Vec3 integrate_trajectory<3>(const VelocityField<3>&, const Vec3&, double, double,
                                      const IntegratorParams&);

}  // namespace lcs
