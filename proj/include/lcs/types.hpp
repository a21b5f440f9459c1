#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <vector>

namespace lcs {

template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;

template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;
using Mat2 = Mat<2>;
using Mat3 = Mat<3>;

template <int Dim>
using GridShape = std::array<std::size_t, Dim>;

template <int Dim>
using Polyline = std::vector<Vec<Dim>>;

template <int Dim>
std::size_t node_count(const GridShape<Dim>& shape) {
  std::size_t total = 1;
  for (auto n : shape) total *= n;
  return total;
}

// Row-major (C order) flattening: the last axis varies fastest.
template <int Dim>
std::size_t flat_index(const GridShape<Dim>& shape, const std::array<std::size_t, Dim>& idx) {
  std::size_t flat = 0;
  for (int d = 0; d < Dim; ++d) flat = flat * shape[d] + idx[d];
  return flat;
}

template <int Dim>
std::array<std::size_t, Dim> unflatten(const GridShape<Dim>& shape, std::size_t flat) {
  std::array<std::size_t, Dim> idx{};
  for (int d = Dim - 1; d >= 0; --d) {
    idx[d] = flat % shape[d];
    flat /= shape[d];
  }
  return idx;
}

}  // namespace lcs
