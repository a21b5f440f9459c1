#pragma once

#include "lcs/error.hpp"
#include "lcs/types.hpp"

#include <array>
#include <cmath>

namespace lcs {

/// Axis-aligned box with optional periodicity per axis.
template <int Dim>
struct Domain {
  Vec<Dim> lower = Vec<Dim>::Zero();
  Vec<Dim> upper = Vec<Dim>::Ones();
  std::array<bool, Dim> periodic{};

  Domain() = default;
  Domain(const Vec<Dim>& lo, const Vec<Dim>& hi, std::array<bool, Dim> per = {})
      : lower(lo), upper(hi), periodic(per) {
    validate();
  }

  void validate() const {
    for (int d = 0; d < Dim; ++d) {
      if (!(lower[d] < upper[d]))
        throw Error(ErrorKind::Validation, "domain lower bound must be below upper bound");
    }
  }

  Vec<Dim> extent() const { return upper - lower; }

  double min_extent() const { return extent().minCoeff(); }

  double diameter() const { return extent().norm(); }

  /// Maps periodic coordinates into [lower, upper); other axes untouched.
  Vec<Dim> wrap(Vec<Dim> x) const {
    for (int d = 0; d < Dim; ++d) {
      if (!periodic[d]) continue;
      const double period = upper[d] - lower[d];
      double r = std::fmod(x[d] - lower[d], period);
      if (r < 0) r += period;
      if (r >= period) r = 0.0;
      x[d] = lower[d] + r;
    }
    return x;
  }

  /// True when every non-periodic coordinate lies in [lower, upper].
  bool contains(const Vec<Dim>& x) const {
    for (int d = 0; d < Dim; ++d) {
      if (!std::isfinite(x[d])) return false;
      if (periodic[d]) continue;
      if (x[d] < lower[d] || x[d] > upper[d]) return false;
    }
    return true;
  }
};

}  // namespace lcs
