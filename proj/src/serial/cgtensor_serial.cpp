#include "../cgtensor_common.hpp"

namespace lcs::serial {

template <int Dim>
CGField<Dim> cauchy_green(const FlowMapGrid<Dim>& fm, double eps_deg) {
  auto cg = detail::prepare_cg<Dim>(fm, eps_deg);
  for (std::size_t i = 0; i < fm.size(); ++i) detail::fill_cg_node<Dim>(fm, cg, i);
  return cg;
}

template CGField<2> cauchy_green<2>(const FlowMapGrid<2>&, double);
template CGField<3> cauchy_green<3>(const FlowMapGrid<3>&, double);

}  // namespace lcs::serial
