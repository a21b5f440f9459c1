#pragma once

#include "lcs/flowfield.hpp"

#include <filesystem>
#include <memory>
#include <vector>

namespace lcs {

/// Velocity samples on a uniform space grid at a list of times.
///
/// Non-periodic axes place nodes at both bounds (spacing = extent / (N-1));
/// periodic axes place N nodes over one period (spacing = extent / N).
/// Evaluation is multilinear in space and linear in time. A single time
/// slice is treated as a steady field valid at all times.
template <int Dim>
class GriddedVelocity final : public VelocityField<Dim> {
 public:
  GriddedVelocity(Domain<Dim> domain, GridShape<Dim> space_shape, std::vector<double> times,
                  std::vector<double> samples, std::string name = "gridded");

  const GridShape<Dim>& space_shape() const { return shape_; }
  const std::vector<double>& times() const { return times_; }
  /// Flat samples indexed (time, node_axis0, ..., node_axis(Dim-1), component).
  const std::vector<double>& samples() const { return samples_; }

  double spacing(int axis) const { return spacing_[axis]; }
  Vec<Dim> node_position(const std::array<std::size_t, Dim>& idx) const;

 protected:
  Vec<Dim> evaluate(const Vec<Dim>& x, double t) const override;

 private:
  Vec<Dim> sample(std::size_t time_index, std::size_t node) const;
  Vec<Dim> eval_slice(std::size_t time_index, const Vec<Dim>& x) const;

  GridShape<Dim> shape_;
  std::vector<double> times_;
  std::vector<double> samples_;
  Vec<Dim> spacing_;
};

/// Samples any field onto the node layout described above.
template <int Dim>
std::shared_ptr<const GriddedVelocity<Dim>> sample_field(const VelocityField<Dim>& field,
                                                         GridShape<Dim> space_shape,
                                                         std::vector<double> times);

/// Reads the spatial dimension recorded in a VGF1 header.
int gridded_dimension(const std::filesystem::path& path);

template <int Dim>
std::shared_ptr<const GriddedVelocity<Dim>> load_gridded(const std::filesystem::path& path);

template <int Dim>
void save_gridded(const GriddedVelocity<Dim>& field, const std::filesystem::path& path);

}  // namespace lcs
