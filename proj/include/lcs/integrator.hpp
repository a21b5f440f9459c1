#pragma once

#include "lcs/flowfield.hpp"

#include <cstddef>
#include <string>

namespace lcs {

enum class Method { Rk4Fixed, Rk45Adaptive };

Method parse_method(const std::string& name);
const char* to_string(Method method);

struct IntegratorParams {
  Method method = Method::Rk45Adaptive;
  double step = 1e-2;        // fixed step size (time units), Rk4Fixed only
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::size_t max_steps = 1'000'000;

  void validate() const;
};

/// Position x(t1; t0, x0). t1 < t0 integrates backward in time.
///
/// Throws EscapeError when the trajectory leaves a non-periodic domain and
/// Error(Divergence) when the step budget is exhausted or the step size
/// collapses. Positions on periodic axes are returned unwrapped.
template <int Dim>
Vec<Dim> integrate_trajectory(const VelocityField<Dim>& field, const Vec<Dim>& x0, double t0, double t1,
                              const IntegratorParams& params);

}  // namespace lcs
