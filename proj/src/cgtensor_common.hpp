#pragma once

#include "lcs/cgtensor.hpp"

namespace lcs::detail {

template <int Dim>
CGField<Dim> prepare_cg(const FlowMapGrid<Dim>& fm, double eps_deg);

/// Fills node i of cg from the flow gradient at seed i.
template <int Dim>
void fill_cg_node(const FlowMapGrid<Dim>& fm, CGField<Dim>& cg, std::size_t i);

}  // namespace lcs::detail
