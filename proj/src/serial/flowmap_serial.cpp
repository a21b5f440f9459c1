// Reference kernel: the same per-seed work as compute_flow_map, in a plain loop.

#include "../flowmap_common.hpp"

namespace lcs::serial {

template <int Dim>
FlowMapGrid<Dim> compute_flow_map(const VelocityField<Dim>& field, const GridShape<Dim>& shape, double a,
                                  double b, const IntegratorParams& params, const FlowMapOptions& options,
                                  const std::optional<Domain<Dim>>& box) {
  auto fm = detail::prepare_flow_map<Dim>(field, shape, a, b, params, options, box);
  for (std::size_t i = 0; i < fm.size(); ++i) detail::integrate_seed<Dim>(field, params, fm, i);
  return fm;
}

template FlowMapGrid<2> compute_flow_map<2>(const VelocityField<2>&, const GridShape<2>&, double, double,
                                            const IntegratorParams&, const FlowMapOptions&,
                                            const std::optional<Domain<2>>&);
template FlowMapGrid<3> compute_flow_map<3>(const VelocityField<3>&, const GridShape<3>&, double, double,
                                            const IntegratorParams&, const FlowMapOptions&,
                                            const std::optional<Domain<3>>&);

}  // namespace lcs::serial
