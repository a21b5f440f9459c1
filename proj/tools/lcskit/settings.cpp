#include "settings.hpp"

#include "lcs/gridded.hpp"

#include <functional>
#include <map>
#include <sstream>

namespace lcskit {

using nlohmann::json;

lcs::IntegratorParams Settings::integrator() const {
  lcs::IntegratorParams p;
  p.method = lcs::parse_method(method);
  p.step = step;
  p.rel_tol = rtol;
  p.abs_tol = atol;
  p.max_steps = max_steps;
  p.validate();
  return p;
}

void apply_config(const json& config, Settings& s) {
  if (!config.is_object()) throw lcs::Error(lcs::ErrorKind::Format, "config must be a JSON object");
  using Setter = std::function<void(const json&)>;
  const std::map<std::string, Setter> table = {
      {"out", [&](const json& v) { s.out = v.get<std::string>(); }},
      {"threads", [&](const json& v) { s.threads = v.get<int>(); }},
      {"force", [&](const json& v) { s.force = v.get<bool>(); }},
      {"seed", [&](const json& v) { s.seed = v.get<std::uint64_t>(); }},
      {"flow", [&](const json& v) { s.flow = v.get<std::string>(); }},
      {"a", [&](const json& v) { s.a = v.get<double>(); }},
      {"b", [&](const json& v) { s.b = v.get<double>(); }},
      {"grid", [&](const json& v) { s.grid = v.get<std::string>(); }},
      {"aux-offset", [&](const json& v) { s.aux_offset = v.get<double>(); }},
      {"method", [&](const json& v) { s.method = v.get<std::string>(); }},
      {"step", [&](const json& v) { s.step = v.get<double>(); }},
      {"rtol", [&](const json& v) { s.rtol = v.get<double>(); }},
      {"atol", [&](const json& v) { s.atol = v.get<double>(); }},
      {"max-steps", [&](const json& v) { s.max_steps = v.get<std::size_t>(); }},
      {"gyre-A", [&](const json& v) { s.gyre_A = v.get<double>(); }},
      {"gyre-eps", [&](const json& v) { s.gyre_eps = v.get<double>(); }},
      {"gyre-omega", [&](const json& v) { s.gyre_omega = v.get<double>(); }},
      {"input", [&](const json& v) { s.input = v.get<std::string>(); }},
      {"eps-deg", [&](const json& v) { s.eps_deg = v.get<double>(); }},
      {"kind", [&](const json& v) { s.kind = v.get<std::string>(); }},
      {"h", [&](const json& v) { s.h = v.get<double>(); }},
      {"lmax", [&](const json& v) { s.lmax = v.get<double>(); }},
      {"sing-radius", [&](const json& v) { s.sing_radius = v.get<double>(); }},
      {"sing-threshold", [&](const json& v) { s.sing_threshold = v.get<double>(); }},
      {"tensor-interp", [&](const json& v) { s.tensor_interp = v.get<bool>(); }},
      {"seeds", [&](const json& v) { s.seeds = v.get<std::string>(); }},
      {"seed-point", [&](const json& v) { s.seed_point = v.get<std::string>(); }},
      {"neighborhood", [&](const json& v) { s.neighborhood = v.get<double>(); }},
      {"dedupe", [&](const json& v) { s.dedupe = v.get<double>(); }},
      {"lines", [&](const json& v) { s.lines = v.get<std::string>(); }},
      {"times", [&](const json& v) { s.times = v.get<std::vector<double>>(); }},
      {"no-refine", [&](const json& v) { s.no_refine = v.get<bool>(); }},
      {"refine-factor", [&](const json& v) { s.refine_factor = v.get<double>(); }},
      {"check", [&](const json& v) { s.check = v.get<std::string>(); }},
      {"n-seeds", [&](const json& v) { s.n_seeds = v.get<std::size_t>(); }},
      {"n-lines", [&](const json& v) { s.n_lines = v.get<std::size_t>(); }},
      {"demo", [&](const json& v) { s.demo = v.get<std::string>(); }},
  };
  for (auto it = config.begin(); it != config.end(); ++it) {
    const auto entry = table.find(it.key());
    if (entry == table.end()) throw lcs::Error(lcs::ErrorKind::Validation, "unknown config key: " + it.key());
    try {
      entry->second(it.value());
    } catch (const json::exception& e) {
      throw lcs::Error(lcs::ErrorKind::Validation, "bad value for config key " + it.key() + ": " + e.what());
    }
  }
}

std::vector<std::size_t> parse_shape(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    std::size_t used = 0;
    long v = -1;
    try {
      v = std::stol(part, &used);
    } catch (const std::exception&) {
    }
    if (used != part.size() || v <= 0) throw lcs::Error(lcs::ErrorKind::InvalidArgument, "bad grid shape: " + text);
    out.push_back(std::size_t(v));
  }
  if (out.size() < 2 || out.size() > 3) throw lcs::Error(lcs::ErrorKind::InvalidArgument, "bad grid shape: " + text);
  return out;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw lcs::Error(lcs::ErrorKind::InvalidArgument, "bad point: " + text);
    out.push_back(v);
  }
  return out;
}

json Flow::describe(const Settings& s) const {
  json d{{"flow", gridded.empty() ? s.flow : std::string("gridded")}, {"dim", dim()}};
  if (s.flow == "double-gyre") d["gyre"] = {s.gyre_A, s.gyre_eps, s.gyre_omega};
  return d;
}

Flow make_flow(const Settings& s) {
  Flow flow;
  if (s.flow == "duffing") {
    flow.f2 = lcs::make_duffing();
  } else if (s.flow == "double-gyre") {
    flow.f2 = lcs::make_double_gyre({s.gyre_A, s.gyre_eps, s.gyre_omega});
  } else if (s.flow == "abc") {
    flow.f3 = lcs::make_abc();
  } else if (std::filesystem::exists(s.flow)) {
    flow.gridded = s.flow;
    if (lcs::gridded_dimension(flow.gridded) == 2)
      flow.f2 = lcs::load_gridded<2>(flow.gridded);
    else
      flow.f3 = lcs::load_gridded<3>(flow.gridded);
  } else {
    throw lcs::Error(lcs::ErrorKind::InvalidArgument,
                     "unknown flow '" + s.flow + "' (expected duffing, double-gyre, abc or a VGF1 file)");
  }
  return flow;
}

}  // namespace lcskit
