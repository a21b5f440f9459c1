// lcskit: command-line front end for the LCS pipeline.

#include "provenance.hpp"
#include "settings.hpp"

#include "lcs/geometry.hpp"
#include "lcs/gridded.hpp"
#include "lcs/output.hpp"

#include <CLI11.hpp>

#include <omp.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace lcskit;
using lcs::Error;
using lcs::ErrorKind;

enum ExitCode { kPass = 0, kInvariantFailure = 1, kUsage = 2, kNumeric = 3 };

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format:
    case ErrorKind::Validation:
    case ErrorKind::InvalidArgument:
    case ErrorKind::OutOfRange:
      return kUsage;
    default:
      return kNumeric;
  }
}

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(clock::now() - start_).count(); }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

struct Context {
  Settings s;
  fs::path out;
};

json integrator_json(const Settings& s) {
  return {{"method", s.method}, {"step", s.step}, {"rtol", s.rtol}, {"atol", s.atol}, {"max_steps", s.max_steps}};
}

json flow_params(const Settings& s, const Flow& flow) {
  json p = flow.describe(s);
  p["a"] = s.a;
  p["b"] = s.b;
  p["grid"] = s.grid;
  p["aux_offset"] = s.aux_offset;
  p["integrator"] = integrator_json(s);
  return p;
}

json trace_json(const Settings& s) {
  return {{"h", s.h},
          {"lmax", s.lmax},
          {"sing_radius", s.sing_radius},
          {"sing_threshold", s.sing_threshold},
          {"tensor_interp", s.tensor_interp}};
}

lcs::TraceParams trace_params(const Settings& s) {
  lcs::TraceParams p;
  p.h = s.h;
  p.max_length = s.lmax;
  p.sing_radius = s.sing_radius;
  p.interp = s.tensor_interp ? lcs::EigvecInterp::Tensor : lcs::EigvecInterp::NodeVectors;
  return p;
}

std::vector<fs::path> flow_inputs(const Flow& flow) {
  if (flow.gridded.empty()) return {};
  return {flow.gridded};
}

/// Runs `produce` unless the stage is already up to date. Returns true when it ran.
template <class Produce>
bool run_stage(const Context& ctx, const Stage& stage, const std::string& label, Produce&& produce) {
  if (!ctx.s.force && stage.up_to_date()) {
    std::cout << label << ": up to date (" << stage.key().substr(0, 12) << ")\n";
    return false;
  }
  const Timer timer;
  const json summary = produce();
  stage.record(timer.seconds(), json{{"summary", summary}});
  std::cout << label << ": " << summary.dump() << " in " << timer.seconds() << " s\n";
  return true;
}

template <class Regenerate>
fs::path resolve_input(const Context& ctx, const std::string& override_path, const std::string& default_name,
                       Regenerate&& regenerate) {
  if (!override_path.empty()) {
    if (!fs::exists(override_path)) throw Error(ErrorKind::InvalidArgument, "input not found: " + override_path);
    return override_path;
  }
  const fs::path path = ctx.out / default_name;
  return fs::exists(path) ? path : regenerate();
}

template <int Dim>
lcs::GridShape<Dim> fixed_shape(const std::vector<std::size_t>& shape) {
  if (int(shape.size()) != Dim)
    throw Error(ErrorKind::InvalidArgument, "grid has " + std::to_string(shape.size()) + " axes, flow has " +
                                                std::to_string(Dim));
  lcs::GridShape<Dim> g{};
  for (int d = 0; d < Dim; ++d) g[d] = shape[d];
  return g;
}

template <int Dim>
json status_summary(const lcs::FlowMapGrid<Dim>& fm) {
  std::size_t failed = 0;
  for (std::size_t i = 0; i < fm.size(); ++i) failed += fm.ok(i) ? 0 : 1;
  return {{"seeds", fm.size()}, {"failed", failed}};
}

fs::path cmd_flowmap(const Context& ctx) {
  const Flow flow = make_flow(ctx.s);
  const auto shape = parse_shape(ctx.s.grid);
  const fs::path out = ctx.out / "flowmap.fmg";
  const Stage stage("flowmap", flow_params(ctx.s, flow), flow_inputs(flow), {out});
  run_stage(ctx, stage, "flowmap", [&] {
    const lcs::FlowMapOptions options{ctx.s.aux_offset, ctx.s.threads};
    const auto ip = ctx.s.integrator();
    if (flow.dim() == 2) {
      const auto fm = lcs::compute_flow_map<2>(*flow.f2, fixed_shape<2>(shape), ctx.s.a, ctx.s.b, ip, options);
      lcs::save_flow_map<2>(fm, out);
      return status_summary(fm);
    }
    const auto fm = lcs::compute_flow_map<3>(*flow.f3, fixed_shape<3>(shape), ctx.s.a, ctx.s.b, ip, options);
    lcs::save_flow_map<3>(fm, out);
    return status_summary(fm);
  });
  return out;
}

template <int Dim>
json cg_summary(const lcs::CGField<Dim>& cg) {
  std::size_t valid = 0, degenerate = 0;
  for (std::size_t i = 0; i < cg.size(); ++i) {
    valid += cg.valid[i];
    degenerate += cg.valid[i] && cg.degenerate[i];
  }
  return {{"nodes", cg.size()}, {"valid", valid}, {"degenerate", degenerate}};
}

fs::path cmd_cg(const Context& ctx, const std::string& input) {
  const fs::path in = resolve_input(ctx, input, "flowmap.fmg", [&] { return cmd_flowmap(ctx); });
  const fs::path cgf = ctx.out / "cg.cgf", ftle = ctx.out / "ftle.csv";
  const Stage stage("cg", {{"eps_deg", ctx.s.eps_deg}}, {in}, {cgf, ftle});
  run_stage(ctx, stage, "cg", [&] {
    std::ofstream csv(ftle, std::ios::binary);
    if (lcs::flow_map_dimension(in) == 2) {
      const auto cg = lcs::cauchy_green<2>(lcs::load_flow_map<2>(in), ctx.s.eps_deg, ctx.s.threads);
      lcs::save_cg<2>(cg, cgf);
      lcs::write_ftle_csv<2>(csv, cg);
      return cg_summary(cg);
    }
    const auto cg = lcs::cauchy_green<3>(lcs::load_flow_map<3>(in), ctx.s.eps_deg, ctx.s.threads);
    lcs::save_cg<3>(cg, cgf);
    lcs::write_ftle_csv<3>(csv, cg);
    return cg_summary(cg);
  });
  return cgf;
}

lcs::CGField<2> load_cg2(const fs::path& path) {
  if (lcs::cg_dimension(path) != 2) throw Error(ErrorKind::InvalidArgument, "line tracing needs a 2D tensor field");
  return lcs::load_cg<2>(path);
}

std::vector<lcs::Vec2> line_seeds(const Settings& s, const lcs::CGField<2>& cg) {
  if (!s.seed_point.empty()) {
    const auto p = parse_point(s.seed_point);
    if (p.size() != 2) throw Error(ErrorKind::InvalidArgument, "--seed-point needs two coordinates");
    return {lcs::Vec2(p[0], p[1])};
  }
  return lcs::seed_grid<2>(fixed_shape<2>(parse_shape(s.seeds)), cg.lower, cg.upper);
}

void cmd_lines(const Context& ctx) {
  const fs::path in = resolve_input(ctx, ctx.s.input, "cg.cgf", [&] { return cmd_cg(ctx, {}); });
  const std::string kind = ctx.s.kind.empty() ? "stretchline" : ctx.s.kind;
  std::vector<lcs::LineKind> kinds;
  if (kind == "both")
    kinds = {lcs::LineKind::Strainline, lcs::LineKind::Stretchline};
  else
    kinds = {lcs::parse_line_kind(kind)};
  const fs::path csv = ctx.out / "lines.csv", js = ctx.out / "lines.json", svg = ctx.out / "lines.svg";
  const json params{{"kind", kind}, {"trace", trace_json(ctx.s)}, {"seeds", ctx.s.seeds}, {"seed_point", ctx.s.seed_point}};
  const Stage stage("lines", params, {in}, {csv, js, svg});
  run_stage(ctx, stage, "lines", [&] {
    const auto cg = load_cg2(in);
    const auto trace = lcs::resolve_trace_params(cg, trace_params(ctx.s));
    std::optional<lcs::SingularitySet> sing;
    if (ctx.s.sing_threshold > 0) sing = lcs::detect_singularities(cg, ctx.s.sing_threshold);
    const auto seeds = line_seeds(ctx.s, cg);

    std::vector<lcs::EigenLine> all;
    std::vector<std::vector<lcs::Polyline<2>>> groups;
    std::size_t failed = 0;
    for (const auto k : kinds) {
      std::vector<std::optional<lcs::EigenLine>> traced(seeds.size());
      const auto n = static_cast<std::ptrdiff_t>(seeds.size());
      const int nt = ctx.s.threads > 0 ? ctx.s.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
          auto line = lcs::trace_eigenline(cg, seeds[i], k, trace, sing ? &*sing : nullptr);
          try {
            line.q = lcs::relative_stretching(line, cg);
          } catch (const Error&) {
          }
          traced[i] = std::move(line);
        } catch (const Error&) {
        }
      }
      groups.emplace_back();
      for (auto& t : traced) {
        if (!t) {
          ++failed;
          continue;
        }
        groups.back().push_back(t->points);
        all.push_back(std::move(*t));
      }
    }
    if (all.empty()) throw Error(ErrorKind::EmptyField, "no seed produced a line");
    std::ofstream c(csv, std::ios::binary);
    lcs::write_polylines_csv<2>(c, lcs::polylines_of(all));
    lcs::write_text(js, json{{"params", params}, {"lines", lcs::to_json(all)}}.dump(1) + "\n");
    lcs::write_text(svg, lcs::lines_svg(groups, {"#d62728", "#1f77b4"}, cg.lower, cg.upper));
    return json{{"lines", all.size()}, {"failed_seeds", failed}};
  });
}

void cmd_lcs(const Context& ctx) {
  const fs::path in = resolve_input(ctx, ctx.s.input, "cg.cgf", [&] { return cmd_cg(ctx, {}); });
  const auto kind = lcs::parse_lcs_kind(ctx.s.kind.empty() ? "attracting" : ctx.s.kind);
  const fs::path js = ctx.out / "lcs.json", csv = ctx.out / "lcs.csv", svg = ctx.out / "lcs.svg";
  const json params{{"kind", lcs::to_string(kind)},
                    {"trace", trace_json(ctx.s)},
                    {"seeds", ctx.s.seeds},
                    {"neighborhood", ctx.s.neighborhood},
                    {"dedupe", ctx.s.dedupe}};
  const Stage stage("lcs", params, {in}, {js, csv, svg});
  run_stage(ctx, stage, "lcs", [&] {
    const auto cg = load_cg2(in);
    lcs::SelectionParams sel;
    sel.seeds = fixed_shape<2>(parse_shape(ctx.s.seeds));
    sel.neighborhood_radius = ctx.s.neighborhood;
    sel.dedupe_tol = ctx.s.dedupe;
    sel.singularity_threshold = ctx.s.sing_threshold;
    sel.trace = trace_params(ctx.s);
    sel.threads = ctx.s.threads;
    const auto set = lcs::extract_lcs(cg, kind, sel);
    json doc = lcs::to_json(set);
    doc["params"] = params;
    lcs::write_text(js, doc.dump(1) + "\n");
    std::ofstream c(csv, std::ios::binary);
    lcs::write_polylines_csv<2>(c, lcs::polylines_of(set.lines));
    lcs::write_text(svg, lcs::lcs_svg(set, cg.lower, cg.upper));
    return json{{"candidates", set.candidates.size()}, {"selected", set.lines.size()}};
  });
}

template <int Dim>
std::vector<lcs::Polyline<Dim>> read_lines_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("line_id,s,x1", 0) != 0) throw Error(ErrorKind::Format, path.string() + " is not a line CSV");
  const auto columns = std::count(line.begin(), line.end(), ',') + 1;
  if (columns != 2 + Dim) throw Error(ErrorKind::Format, "line CSV dimension does not match the flow");
  std::vector<lcs::Polyline<Dim>> lines;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto values = parse_point(line);
    if (values.size() != std::size_t(2 + Dim)) throw Error(ErrorKind::Format, "malformed line CSV row: " + line);
    const auto id = std::size_t(values[0]);
    if (id >= lines.size()) lines.resize(id + 1);
    lcs::Vec<Dim> p;
    for (int d = 0; d < Dim; ++d) p[d] = values[2 + d];
    lines[id].push_back(p);
  }
  return lines;
}

template <int Dim>
json advect_lines(const Context& ctx, const lcs::VelocityField<Dim>& field, const fs::path& lines_path,
                  const std::vector<double>& times, const fs::path& csv, const fs::path& svg) {
  const auto lines = read_lines_csv<Dim>(lines_path);
  lcs::AdvectOptions options;
  options.refine = !ctx.s.no_refine;
  options.refine_factor = ctx.s.refine_factor;
  options.threads = ctx.s.threads;
  const auto ip = ctx.s.integrator();
  std::ofstream out(csv, std::ios::binary);
  out << "time,line_id,s";
  for (int d = 0; d < Dim; ++d) out << ",x" << d + 1;
  out << '\n';
  out.precision(17);
  std::size_t escaped = 0, saturated = 0;
  std::vector<lcs::Polyline<Dim>> last;
  for (double t : times) {
    last.clear();
    for (std::size_t id = 0; id < lines.size(); ++id) {
      const auto adv = lcs::advect_curve<Dim>(lines[id], field, ctx.s.a, t, ip, options);
      escaped += adv.escaped_count();
      saturated += adv.saturated;
      double s = 0.0;
      for (std::size_t i = 0; i < adv.points.size(); ++i) {
        if (i > 0) s += (adv.initial[i] - adv.initial[i - 1]).norm();
        out << t << ',' << id << ',' << s;
        for (int d = 0; d < Dim; ++d) out << ',' << adv.points[i][d];
        out << '\n';
      }
      last.push_back(adv.points);
    }
  }
  if constexpr (Dim == 2) {
    lcs::Vec2 lo = field.domain().lower, hi = field.domain().upper;
    lcs::write_text(svg, lcs::lines_svg({lines, last}, {"#1f77b4", "#d62728"}, lo, hi));
  } else {
    lcs::write_text(svg, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1\" height=\"1\"/>\n");
  }
  return {{"lines", lines.size()}, {"times", times.size()}, {"escaped_vertices", escaped}, {"saturated", saturated}};
}

int cmd_demo(const Context& ctx);

int cmd_advect(const Context& ctx) {
  if (!ctx.s.demo.empty()) return cmd_demo(ctx);
  fs::path lines_path = ctx.s.lines;
  if (lines_path.empty()) {
    lines_path = fs::exists(ctx.out / "lcs.csv") ? ctx.out / "lcs.csv" : ctx.out / "lines.csv";
    if (!fs::exists(lines_path)) throw Error(ErrorKind::InvalidArgument, "no line CSV given and none in the output directory");
  }
  const Flow flow = make_flow(ctx.s);
  const std::vector<double> times = ctx.s.times.empty() ? std::vector<double>{ctx.s.b} : ctx.s.times;
  const fs::path csv = ctx.out / "advected.csv", svg = ctx.out / "advected.svg";
  json params = flow.describe(ctx.s);
  params["a"] = ctx.s.a;
  params["times"] = times;
  params["refine"] = !ctx.s.no_refine;
  params["refine_factor"] = ctx.s.refine_factor;
  params["integrator"] = integrator_json(ctx.s);
  auto inputs = flow_inputs(flow);
  inputs.push_back(lines_path);
  const Stage stage("advect", params, inputs, {csv, svg});
  run_stage(ctx, stage, "advect", [&] {
    return flow.dim() == 2 ? advect_lines<2>(ctx, *flow.f2, lines_path, times, csv, svg)
                           : advect_lines<3>(ctx, *flow.f3, lines_path, times, csv, svg);
  });
  return kPass;
}

int cmd_verify(const Context& ctx) {
  const Flow flow = make_flow(ctx.s);
  const std::string check = ctx.s.check;
  if (check != "all" && check != "theorem1" && check != "lemma1")
    throw Error(ErrorKind::InvalidArgument, "--check must be theorem1, lemma1 or all");
  if (check == "theorem1" && flow.dim() != 2)
    throw Error(ErrorKind::InvalidArgument, "the theorem1 check needs a 2D flow");
  const fs::path report_path = ctx.out / "verify.json";
  json params = flow_params(ctx.s, flow);
  params["check"] = check;
  params["seed"] = ctx.s.seed;
  params["n_seeds"] = ctx.s.n_seeds;
  params["n_lines"] = ctx.s.n_lines;
  params["trace"] = trace_json(ctx.s);
  const Stage stage("verify", params, flow_inputs(flow), {report_path});
  run_stage(ctx, stage, "verify", [&] {
    json report{{"flow", flow.describe(ctx.s)}, {"a", ctx.s.a}, {"b", ctx.s.b}, {"checks", json::array()}};
    bool passed = true;
    if (check == "all" || check == "lemma1") {
      lcs::Lemma1Params p;
      p.n_seeds = ctx.s.n_seeds;
      p.seed = ctx.s.seed;
      if (ctx.s.aux_offset > 0) p.aux_offset = ctx.s.aux_offset;
      const auto r = flow.dim() == 2 ? lcs::verify_lemma1<2>(*flow.f2, ctx.s.a, ctx.s.b, p)
                                     : lcs::verify_lemma1<3>(*flow.f3, ctx.s.a, ctx.s.b, p);
      json j = lcs::to_json(r);
      j["integrator"] = {{"rtol", p.integrator.rel_tol}, {"atol", p.integrator.abs_tol}};
      report["checks"].push_back(j);
      passed = passed && r.passed();
    }
    if ((check == "all" || check == "theorem1") && flow.dim() == 2) {
      lcs::Theorem1Params p;
      p.n_lines = ctx.s.n_lines;
      p.seed = ctx.s.seed;
      p.forward_grid = p.backward_grid = fixed_shape<2>(parse_shape(ctx.s.grid));
      p.integrator = ctx.s.integrator();
      p.trace = trace_params(ctx.s);
      p.threads = ctx.s.threads;
      const auto r = lcs::verify_theorem1(*flow.f2, ctx.s.a, ctx.s.b, p);
      report["checks"].push_back(lcs::to_json(r));
      passed = passed && r.passed();
    } else if (check == "all") {
      report["checks"].push_back({{"check", "theorem1"}, {"skipped", "needs a 2D flow"}});
    }
    report["passed"] = passed;
    lcs::write_text(report_path, report.dump(2) + "\n");
    return json{{"passed", passed}};
  });
  std::ifstream in(report_path);
  const json report = json::parse(in);
  const bool passed = report.at("passed").get<bool>();
  std::cout << "verify: " << (passed ? "PASS" : "FAIL") << " (" << report_path.string() << ")\n";
  return passed ? kPass : kInvariantFailure;
}

std::string abc_svg(const lcs::AbcPlaneResult& r) {
  // Side view: the advected ball and plane projected onto (major axis, flat axis).
  const auto axes = lcs::principal_axes<3>(r.ball_advected);
  const lcs::Vec3 major = axes.moments.vectors.col(2), flat = axes.moments.vectors.col(0);
  auto project = [&](const lcs::Polyline<3>& pts) {
    lcs::Polyline<2> out;
    for (const auto& p : pts) out.emplace_back((p - axes.mean).dot(major), (p - axes.mean).dot(flat));
    return out;
  };
  const auto ball = project(r.ball_advected), plane = project(r.plane_advected);
  double extent = 0.0;
  for (const auto& p : ball) extent = std::max(extent, p.cwiseAbs().maxCoeff());
  extent = std::max(extent, 1e-6) * 1.1;
  lcs::SvgCanvas canvas(lcs::Vec2(-extent, -extent), lcs::Vec2(extent, extent), 600.0);
  canvas.frame();
  canvas.points(ball, 1.0, "#1f77b4");
  canvas.points(plane, 1.2, "#d62728");
  return canvas.str();
}

std::string instability_svg(const lcs::InstabilityResult& r) {
  lcs::Vec2 lo = lcs::Vec2::Constant(1e300), hi = -lo;
  for (const auto& p : r.lcs.points) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  for (const auto& p : r.backward_image)
    if (p.allFinite()) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  const lcs::Vec2 pad = 0.1 * (hi - lo).cwiseMax(lcs::Vec2::Constant(1e-3));
  lcs::SvgCanvas canvas(lo - pad, hi + pad);
  canvas.frame();
  canvas.polyline(r.lcs.points, "#1f77b4", 2.0);
  canvas.polyline(r.backward_image, "#d62728", 1.0);
  return canvas.str();
}

int cmd_demo(const Context& ctx) {
  const std::string name = ctx.s.demo;
  if (name != "duffing-blobs" && name != "abc-plane" && name != "backward-instability")
    throw Error(ErrorKind::InvalidArgument, "--demo must be duffing-blobs, abc-plane or backward-instability");
  const fs::path js = ctx.out / (name + ".json"), svg = ctx.out / (name + ".svg");
  const Stage stage("demo", {{"demo", name}, {"threads_independent", true}}, {}, {js, svg});
  run_stage(ctx, stage, "demo " + name, [&] {
    json doc;
    if (name == "duffing-blobs") {
      const lcs::DuffingBlobParams p;
      const auto r = lcs::duffing_blobs(p);
      doc = lcs::to_json(r);
      lcs::write_text(svg, lcs::duffing_blobs_svg(r, p));
    } else if (name == "abc-plane") {
      const auto r = lcs::abc_plane();
      doc = lcs::to_json(r);
      lcs::write_text(svg, abc_svg(r));
    } else {
      lcs::InstabilityParams p;
      p.threads = ctx.s.threads;
      const auto r = lcs::backward_advection_instability(p);
      doc = lcs::to_json(r);
      lcs::write_text(svg, instability_svg(r));
    }
    lcs::write_text(js, doc.dump(2) + "\n");
    return doc.contains("ratio") ? json{{"ratio", doc["ratio"]}} : json{{"written", js.filename().string()}};
  });
  return kPass;
}

std::optional<std::string> find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return std::nullopt;
}

void add_flow_options(CLI::App* cmd, Settings& s) {
  cmd->add_option("--flow", s.flow, "duffing, double-gyre, abc, or a VGF1 file");
  cmd->add_option("--a", s.a, "initial time");
  cmd->add_option("--b", s.b, "final time (b < a runs backward)");
  cmd->add_option("--grid", s.grid, "seed grid, e.g. 200x200 or 32x32x32");
  cmd->add_option("--aux-offset", s.aux_offset, "auxiliary stencil offset (0 = 1e-4 x smallest extent)");
  cmd->add_option("--method", s.method, "rk45 or rk4");
  cmd->add_option("--step", s.step, "fixed RK4 time step");
  cmd->add_option("--rtol", s.rtol, "adaptive relative tolerance");
  cmd->add_option("--atol", s.atol, "adaptive absolute tolerance");
  cmd->add_option("--max-steps", s.max_steps, "step limit per trajectory");
  cmd->add_option("--gyre-A", s.gyre_A, "double-gyre amplitude");
  cmd->add_option("--gyre-eps", s.gyre_eps, "double-gyre perturbation");
  cmd->add_option("--gyre-omega", s.gyre_omega, "double-gyre frequency");
}

void add_trace_options(CLI::App* cmd, Settings& s) {
  cmd->add_option("--h", s.h, "arclength step (0 = half the grid spacing)");
  cmd->add_option("--lmax", s.lmax, "maximum line length (0 = 20 x box diameter)");
  cmd->add_option("--sing-radius", s.sing_radius, "singularity stop radius (0 = one cell diagonal)");
  cmd->add_option("--sing-threshold", s.sing_threshold, "anisotropy threshold for singularities (0 = off)");
  cmd->add_flag("--tensor-interp", s.tensor_interp, "interpolate tensors instead of eigenvectors");
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  try {
    if (const auto config = find_config_arg(argc, argv)) {
      std::ifstream in(*config);
      if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read config " + *config);
      apply_config(json::parse(in), ctx.s);
    }
  } catch (const json::exception& e) {
    std::cerr << "error: config is not valid JSON: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  Settings& s = ctx.s;
  CLI::App app{"Lagrangian coherent structures from a single forward flow map"};
  app.set_version_flag("--version", version_string());
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", s.config, "JSON config; keys are long flag names, flags win");
  app.add_option("--out", s.out, "output directory");
  app.add_option("--threads", s.threads, "worker threads (0 = OpenMP default)");
  app.add_flag("--force", s.force, "rerun stages even when their inputs are unchanged");
  app.add_option("--seed", s.seed, "random seed for sampled checks");

  auto* flowmap = app.add_subcommand("flowmap", "integrate the seed grid and its auxiliary stencil");
  add_flow_options(flowmap, s);

  auto* cg = app.add_subcommand("cg", "Cauchy-Green tensor field and FTLE");
  add_flow_options(cg, s);
  cg->add_option("--input", s.input, "FMG1 flow map (default: <out>/flowmap.fmg, regenerated if absent)");
  cg->add_option("--eps-deg", s.eps_deg, "relative eigenvalue gap that counts as degenerate");

  auto* lines = app.add_subcommand("lines", "trace strainlines or stretchlines");
  auto* lcs_cmd = app.add_subcommand("lcs", "select attracting or repelling LCSs");
  for (auto* cmd : {lines, lcs_cmd}) {
    add_flow_options(cmd, s);
    add_trace_options(cmd, s);
    cmd->add_option("--input", s.input, "CGF1 tensor field (default: <out>/cg.cgf, regenerated if absent)");
    cmd->add_option("--eps-deg", s.eps_deg, "relative eigenvalue gap that counts as degenerate");
    cmd->add_option("--seeds", s.seeds, "seed grid over the tensor box, e.g. 30x30");
  }
  lines->add_option("--kind", s.kind, "strainline, stretchline or both");
  lines->add_option("--seed-point", s.seed_point, "trace a single line through x,y");
  lcs_cmd->add_option("--kind", s.kind, "attracting or repelling");
  lcs_cmd->add_option("--neighborhood", s.neighborhood, "selection radius (0 = two seed spacings)");
  lcs_cmd->add_option("--dedupe", s.dedupe, "Hausdorff dedupe tolerance (0 = one cell diagonal)");

  auto* advect = app.add_subcommand("advect", "advect line CSVs, or run a demo with --demo");
  add_flow_options(advect, s);
  advect->add_option("--lines", s.lines, "line CSV (default: <out>/lcs.csv or <out>/lines.csv)");
  advect->add_option("--times", s.times, "target times (default: b)")->delimiter(',');
  advect->add_flag("--no-refine", s.no_refine, "disable midpoint refinement");
  advect->add_option("--refine-factor", s.refine_factor, "segment growth that triggers refinement");
  advect->add_option("--demo", s.demo, "duffing-blobs, abc-plane or backward-instability");

  auto* verify = app.add_subcommand("verify", "numerical checks of the duality theorem and eigenvalue reciprocity");
  add_flow_options(verify, s);
  add_trace_options(verify, s);
  verify->add_option("--check", s.check, "theorem1, lemma1 or all");
  verify->add_option("--n-seeds", s.n_seeds, "random seeds for lemma1");
  verify->add_option("--n-lines", s.n_lines, "lines per kind for theorem1");

  auto* demo = app.add_subcommand("demo", "reproduce a demonstration");
  demo->add_option("--demo", s.demo, "duffing-blobs, abc-plane or backward-instability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  ctx.out = s.out;
  try {
    DirLock lock(ctx.out);
    if (flowmap->parsed()) cmd_flowmap(ctx);
    if (cg->parsed()) cmd_cg(ctx, s.input);
    if (lines->parsed()) cmd_lines(ctx);
    if (lcs_cmd->parsed()) cmd_lcs(ctx);
    if (advect->parsed()) return cmd_advect(ctx);
    if (verify->parsed()) return cmd_verify(ctx);
    if (demo->parsed()) {
      if (s.demo.empty()) throw Error(ErrorKind::InvalidArgument, "demo needs --demo NAME");
      return cmd_demo(ctx);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << lcs::to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kPass;
}
