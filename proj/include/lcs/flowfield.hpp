#pragma once

#include "lcs/domain.hpp"
#include "lcs/types.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <string>

namespace lcs {

enum class FieldKind { Analytic, Gridded };

/// A velocity field u(x, t) on a rectangular, possibly periodic, domain.
///
/// eval() wraps periodic coordinates and rejects positions outside
/// non-periodic axes and times outside [t_min, t_max]. Implementations are
/// immutable, so eval() may be called concurrently.
template <int Dim>
class VelocityField {
 public:
  virtual ~VelocityField() = default;

  const Domain<Dim>& domain() const { return domain_; }
  FieldKind kind() const { return kind_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  const std::string& name() const { return name_; }

  Vec<Dim> eval(const Vec<Dim>& x, double t) const;

 protected:
  VelocityField(Domain<Dim> domain, FieldKind kind, std::string name,
                double t_min = -std::numeric_limits<double>::infinity(),
                double t_max = std::numeric_limits<double>::infinity());

  // x is already wrapped and inside the domain.
  virtual Vec<Dim> evaluate(const Vec<Dim>& x, double t) const = 0;

 private:
  Domain<Dim> domain_;
  FieldKind kind_;
  std::string name_;
  double t_min_;
  double t_max_;
};

template <int Dim>
using FieldPtr = std::shared_ptr<const VelocityField<Dim>>;

template <int Dim>
class AnalyticField final : public VelocityField<Dim> {
 public:
  using Function = std::function<Vec<Dim>(const Vec<Dim>&, double)>;

  AnalyticField(Domain<Dim> domain, Function fn, std::string name)
      : VelocityField<Dim>(std::move(domain), FieldKind::Analytic, std::move(name)),
        fn_(std::move(fn)) {}

 protected:
  Vec<Dim> evaluate(const Vec<Dim>& x, double t) const override { return fn_(x, t); }

 private:
  Function fn_;
};

template <int Dim>
FieldPtr<Dim> make_analytic(Domain<Dim> domain, typename AnalyticField<Dim>::Function fn,
                            std::string name = "analytic") {
  return std::make_shared<AnalyticField<Dim>>(std::move(domain), std::move(fn), std::move(name));
}

/// Unforced, undamped Duffing oscillator on [-3, 3]^2:
/// x1' = x2, x2' = 4 x1 - x1^3.
FieldPtr<2> make_duffing();

/// Conserved quantity of the Duffing oscillator, 0.5 x1^4 - 4 x1^2 + x2^2.
double duffing_hamiltonian(const Vec2& x);

struct AbcParams {
  double A = 1.0;
  double B = 0.816496580927726;  // sqrt(2/3)
  double C = 0.5773502691896257;  // sqrt(1/3)
};

/// Arnold-Beltrami-Childress flow on the 2*pi-periodic cube.
FieldPtr<3> make_abc(AbcParams params = {});

struct DoubleGyreParams {
  double A = 0.1;
  double eps = 0.1;
  double omega = 0.6283185307179586;  // 2*pi/10
};

/// Time-periodic double gyre on [0, 2] x [0, 1] derived from the stream
/// function psi = A sin(pi f(x, t)) sin(pi y), f = eps sin(wt) x^2 + (1 - 2 eps sin(wt)) x.
FieldPtr<2> make_double_gyre(DoubleGyreParams params = {});

/// Divergence of a field by central differences with step `h`.
template <int Dim>
double divergence(const VelocityField<Dim>& field, const Vec<Dim>& x, double t, double h = 1e-5);

}  // namespace lcs
