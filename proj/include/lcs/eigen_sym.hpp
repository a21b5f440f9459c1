#pragma once

#include "lcs/types.hpp"

namespace lcs {

inline constexpr double kDefaultDegeneracy = 1e-4;

/// Sorted eigen-decomposition of a symmetric matrix.
/// Column k of `vectors` belongs to `values[k]`; values ascend.
template <int Dim>
struct SymEigen {
  Vec<Dim> values;
  Mat<Dim> vectors;
  bool degenerate = false;
};

/// Closed-form symmetric eigensolver for Dim = 2 (half-angle) and Dim = 3
/// (trigonometric roots, then the 2x2 problem on the complement of the best
/// separated eigenvector). Each eigenvector has its first component with
/// magnitude above 1e-12 positive. `degenerate` is set when any adjacent
/// relative gap (l[k+1] - l[k]) / l[k+1] falls below eps_deg.
template <int Dim>
SymEigen<Dim> eig_sym(const Mat<Dim>& C, double eps_deg = kDefaultDegeneracy);

/// Flips v so that its first clearly nonzero component is positive.
template <int Dim>
Vec<Dim> canonical_sign(Vec<Dim> v);

}  // namespace lcs
