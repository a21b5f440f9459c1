#pragma once

#include "lcs/cgtensor.hpp"
#include "lcs/flowfield.hpp"
#include "lcs/integrator.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lcskit {

/// Every tunable of a run. Defaults come first, then the JSON config file,
/// then command-line flags.
struct Settings {
  // global
  std::string config;
  std::string out = "lcskit-out";
  int threads = 0;
  bool force = false;
  std::uint64_t seed = 0;

  // flow and flow map
  std::string flow = "duffing";
  double a = 0.0;
  double b = 2.0;
  std::string grid = "200x200";
  double aux_offset = 0.0;
  std::string method = "rk45";
  double step = 1e-2;
  double rtol = 1e-8;
  double atol = 1e-10;
  std::size_t max_steps = 1'000'000;
  double gyre_A = 0.1;
  double gyre_eps = 0.1;
  double gyre_omega = 0.6283185307179586;
  std::string input;

  // tensor and tracing
  double eps_deg = lcs::kDefaultDegeneracy;
  std::string kind;
  double h = 0.0;
  double lmax = 0.0;
  double sing_radius = 0.0;
  double sing_threshold = 0.0;
  bool tensor_interp = false;
  std::string seeds = "30x30";
  std::string seed_point;
  double neighborhood = 0.0;
  double dedupe = 0.0;

  // advection
  std::string lines;
  std::vector<double> times;
  bool no_refine = false;
  double refine_factor = 2.0;

  // verification and demos
  std::string check = "all";
  std::size_t n_seeds = 50;
  std::size_t n_lines = 20;
  std::string demo;

  lcs::IntegratorParams integrator() const;
  std::filesystem::path out_dir() const { return out; }
};

/// Overwrites fields named in the config object (keys use the long flag
/// names, e.g. "sing-radius"). Unknown keys are rejected.
void apply_config(const nlohmann::json& config, Settings& s);

std::vector<std::size_t> parse_shape(const std::string& text);
std::vector<double> parse_point(const std::string& text);

/// A 2D or 3D velocity field selected by name or VGF1 path.
struct Flow {
  lcs::FieldPtr<2> f2;
  lcs::FieldPtr<3> f3;
  std::filesystem::path gridded;  // set when loaded from a file
  int dim() const { return f2 ? 2 : 3; }
  nlohmann::json describe(const Settings& s) const;
};

Flow make_flow(const Settings& s);

}  // namespace lcskit
