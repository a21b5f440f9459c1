#pragma once

// Pieces shared by the OpenMP and serial flow-map kernels.

#include "lcs/flowmap.hpp"

namespace lcs::detail {

template <int Dim>
FlowMapGrid<Dim> prepare_flow_map(const VelocityField<Dim>& field, const GridShape<Dim>& shape, double a,
                                  double b, const IntegratorParams& params, const FlowMapOptions& options,
                                  const std::optional<Domain<Dim>>& box);

/// Integrates seed i and its stencil into the output slots of `fm`.
template <int Dim>
void integrate_seed(const VelocityField<Dim>& field, const IntegratorParams& params, FlowMapGrid<Dim>& fm,
                    std::size_t i);

}  // namespace lcs::detail
