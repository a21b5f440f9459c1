#include "lcs/flowfield.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lcs {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format: return "format";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Data: return "data";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::Escape: return "escape";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Unavailable: return "unavailable";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::EmptyLine: return "empty-line";
    case ErrorKind::PartialData: return "partial-data";
    case ErrorKind::EmptyField: return "empty-field";
    case ErrorKind::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

template <int Dim>
VelocityField<Dim>::VelocityField(Domain<Dim> domain, FieldKind kind, std::string name,
                                  double t_min, double t_max)
    : domain_(std::move(domain)), kind_(kind), name_(std::move(name)), t_min_(t_min), t_max_(t_max) {
  domain_.validate();
}

template <int Dim>
Vec<Dim> VelocityField<Dim>::eval(const Vec<Dim>& x, double t) const {
  if (!(t >= t_min_ && t <= t_max_)) {
    std::ostringstream msg;
    msg << name_ << ": time " << t << " outside [" << t_min_ << ", " << t_max_ << "]";
    throw Error(ErrorKind::OutOfRange, msg.str());
  }
  if (!domain_.contains(x)) {
    std::ostringstream msg;
    msg << name_ << ": position (" << x.transpose() << ") outside domain";
    throw Error(ErrorKind::OutOfDomain, msg.str());
  }
  return evaluate(domain_.wrap(x), t);
}

FieldPtr<2> make_duffing() {
  Domain<2> domain(Vec2(-3.0, -3.0), Vec2(3.0, 3.0));
  return make_analytic<2>(
      domain,
      [](const Vec2& x, double) { return Vec2(x[1], 4.0 * x[0] - x[0] * x[0] * x[0]); },
      "duffing");
}

double duffing_hamiltonian(const Vec2& x) {
  const double x2 = x[0] * x[0];
  return 0.5 * x2 * x2 - 4.0 * x2 + x[1] * x[1];
}

FieldPtr<3> make_abc(AbcParams p) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Domain<3> domain(Vec3::Zero(), Vec3::Constant(two_pi), {true, true, true});
  return make_analytic<3>(
      domain,
      [p](const Vec3& x, double) {
        return Vec3(p.A * std::sin(x[2]) + p.C * std::cos(x[1]),
                    p.B * std::sin(x[0]) + p.A * std::cos(x[2]),
                    p.C * std::sin(x[1]) + p.B * std::cos(x[0]));
      },
      "abc");
}

FieldPtr<2> make_double_gyre(DoubleGyreParams p) {
  if (!(p.A > 0)) throw Error(ErrorKind::InvalidArgument, "double gyre amplitude must be positive");
  Domain<2> domain(Vec2(0.0, 0.0), Vec2(2.0, 1.0));
  return make_analytic<2>(
      domain,
      [p](const Vec2& x, double t) {
        constexpr double pi = std::numbers::pi;
        const double a = p.eps * std::sin(p.omega * t);
        const double b = 1.0 - 2.0 * a;
        const double f = a * x[0] * x[0] + b * x[0];
        const double dfdx = 2.0 * a * x[0] + b;
        return Vec2(-pi * p.A * std::sin(pi * f) * std::cos(pi * x[1]),
                    pi * p.A * std::cos(pi * f) * std::sin(pi * x[1]) * dfdx);
      },
      "double-gyre");
}

template <int Dim>
double divergence(const VelocityField<Dim>& field, const Vec<Dim>& x, double t, double h) {
  double div = 0.0;
  for (int d = 0; d < Dim; ++d) {
    Vec<Dim> e = Vec<Dim>::Zero();
    e[d] = h;
    div += (field.eval(x + e, t)[d] - field.eval(x - e, t)[d]) / (2.0 * h);
  }
  return div;
}

template class VelocityField<2>;
template class VelocityField<3>;
template double divergence<2>(const VelocityField<2>&, const Vec2&, double, double);
template double divergence<3>(const VelocityField<3>&, const Vec3&, double, double);

}  // namespace lcs
