#include "lcs/output.hpp"

#include "lcs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace lcs {

namespace {

std::string num(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

template <int Dim>
json vec_json(const Vec<Dim>& v) {
  json out = json::array();
  for (int d = 0; d < Dim; ++d) out.push_back(v[d]);
  return out;
}

template <int Dim>
json points_json(const Polyline<Dim>& points) {
  json out = json::array();
  for (const auto& p : points) out.push_back(vec_json<Dim>(p));
  return out;
}

// JSON cannot carry NaN; report it as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

template <int Dim>
void write_polylines_csv(std::ostream& out, const std::vector<Polyline<Dim>>& lines) {
  out << "line_id,s";
  for (int d = 0; d < Dim; ++d) out << ",x" << d + 1;
  out << '\n';
  for (std::size_t id = 0; id < lines.size(); ++id) {
    double s = 0.0;
    for (std::size_t i = 0; i < lines[id].size(); ++i) {
      if (i > 0) s += (lines[id][i] - lines[id][i - 1]).norm();
      out << id << ',' << num(s);
      for (int d = 0; d < Dim; ++d) out << ',' << num(lines[id][i][d]);
      out << '\n';
    }
  }
}

template <int Dim>
void write_ftle_csv(std::ostream& out, const CGField<Dim>& cg) {
  const auto values = ftle<Dim>(cg);
  for (int d = 0; d < Dim; ++d) out << 'x' << d + 1 << ',';
  out << "ftle\n";
  for (std::size_t i = 0; i < cg.size(); ++i) {
    const Vec<Dim> x = cg.node_position(i);
    for (int d = 0; d < Dim; ++d) out << num(x[d]) << ',';
    if (std::isfinite(values[i])) out << num(values[i]);
    out << '\n';
  }
}

template void write_polylines_csv<2>(std::ostream&, const std::vector<Polyline<2>>&);
template void write_polylines_csv<3>(std::ostream&, const std::vector<Polyline<3>>&);
template void write_ftle_csv<2>(std::ostream&, const CGField<2>&);
template void write_ftle_csv<3>(std::ostream&, const CGField<3>&);

std::vector<Polyline<2>> polylines_of(const std::vector<EigenLine>& lines) {
  std::vector<Polyline<2>> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(l.points);
  return out;
}

json to_json(const EigenLine& line) {
  return json{{"kind", to_string(line.kind)},
              {"seed", vec_json<2>(line.seed)},
              {"seed_index", line.seed_index},
              {"stop_forward", to_string(line.stop_fwd)},
              {"stop_backward", to_string(line.stop_bwd)},
              {"length", line.length},
              {"q", number_or_null(line.q)},
              {"points", points_json<2>(line.points)}};
}

json to_json(const std::vector<EigenLine>& lines) {
  json out = json::array();
  for (const auto& l : lines) out.push_back(to_json(l));
  return out;
}

json to_json(const LcsSet& set) {
  json sing = json::array();
  for (const auto& p : set.singularities.points) sing.push_back(vec_json<2>(p));
  json candidates_q = json::array();
  for (const auto& c : set.candidates) candidates_q.push_back(number_or_null(c.q));
  return json{{"kind", to_string(set.kind)},
              {"neighborhood_radius", set.neighborhood_radius},
              {"dedupe_tol", set.dedupe_tol},
              {"candidate_count", set.candidates.size()},
              {"candidate_q", candidates_q},
              {"selected_candidates", set.selected},
              {"q_values", set.q_values},
              {"singularity_threshold", set.singularities.threshold},
              {"singularities", sing},
              {"lines", to_json(set.lines)}};
}

json to_json(const CheckStats& stats) {
  return json{{"count", stats.count},     {"max", stats.max},       {"mean", stats.mean},
              {"tol", stats.tol},         {"passed", stats.passed}, {"pass_fraction", stats.pass_fraction()}};
}

json to_json(const Lemma1Report& report) {
  return json{{"check", "lemma1"},
              {"lambda_n_fwd_times_lambda_1_bwd", to_json(report.top)},
              {"lambda_1_fwd_times_lambda_n_bwd", to_json(report.bottom)},
              {"excluded", report.excluded},
              {"passed", report.passed()}};
}

namespace {
json kind_json(const Theorem1KindReport& r, double required) {
  return json{{"kind", to_string(r.kind)},
              {"lines", r.lines},
              {"alignment", to_json(r.alignment)},
              {"excluded_escape", r.excluded_escape},
              {"excluded_degenerate", r.excluded_degenerate},
              {"passed", r.passed(required)}};
}
}  // namespace

json to_json(const Theorem1Report& report) {
  return json{{"check", "theorem1"},
              {"required_fraction", report.required_fraction},
              {"strainlines", kind_json(report.strain, report.required_fraction)},
              {"stretchlines", kind_json(report.stretch, report.required_fraction)},
              {"passed", report.passed()}};
}

json to_json(const DuffingBlobResult& result) {
  json snaps = json::array();
  for (const auto& s : result.snapshots)
    snaps.push_back(json{{"radius", s.radius},
                         {"time", s.time},
                         {"major_axis", vec_json<2>(s.major_axis)},
                         {"angle_deg", s.angle_deg}});
  json tangents = json::array();
  for (const auto& t : result.tangents) tangents.push_back(vec_json<2>(t));
  return json{{"demo", "duffing-blobs"}, {"stretchline_tangents", tangents}, {"snapshots", snaps}};
}

json to_json(const AbcPlaneResult& r) {
  return json{{"demo", "abc-plane"},
              {"center", vec_json<3>(r.plane.center)},
              {"normal", vec_json<3>(r.plane.normal)},
              {"lambdas", vec_json<3>(r.plane.lambdas)},
              {"eigen_residual", r.plane.residual},
              {"advected_plane_normal", vec_json<3>(r.advected_plane_normal)},
              {"linearized_normal", vec_json<3>(r.linearized_normal)},
              {"ball_flat_axis", vec_json<3>(r.ball_flat_axis)},
              {"ball_moments", vec_json<3>(r.ball_moments)},
              {"angle_deg", r.angle_deg}};
}

json to_json(const InstabilityResult& r) {
  return json{{"demo", "backward-instability"},
              {"lcs_q", r.lcs.q},
              {"lcs_length", r.lcs.length},
              {"seed_image", vec_json<2>(r.seed_image)},
              {"window", r.window},
              {"forward_error", r.forward_error},
              {"backward_error", r.backward_error},
              {"ratio", r.ratio()}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for " + path.string());
}

SvgCanvas::SvgCanvas(const Vec2& lower, const Vec2& upper, double width_px)
    : lower_(lower), upper_(upper), width_(width_px) {
  const Vec2 extent = upper - lower;
  if (!(extent.minCoeff() > 0)) throw Error(ErrorKind::InvalidArgument, "empty SVG extent");
  scale_ = width_px / extent[0];
  height_ = extent[1] * scale_;
}

std::string SvgCanvas::xy(const Vec2& p) const {
  return num((p[0] - lower_[0]) * scale_, "%.3f") + "," + num((upper_[1] - p[1]) * scale_, "%.3f");
}

void SvgCanvas::polyline(const Polyline<2>& points, const std::string& color, double width, double opacity) {
  // Non-finite vertices split the polyline.
  std::string run;
  auto flush = [&] {
    if (!run.empty())
      body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + num(width, "%.2f") +
               "\" stroke-opacity=\"" + num(opacity, "%.2f") + "\" points=\"" + run + "\"/>\n";
    run.clear();
  };
  for (const auto& p : points) {
    if (!p.allFinite()) {
      flush();
      continue;
    }
    if (!run.empty()) run += ' ';
    run += xy(p);
  }
  flush();
}

void SvgCanvas::circle(const Vec2& center, double radius_px, const std::string& color) {
  if (!center.allFinite()) return;
  const auto c = xy(center);
  const auto comma = c.find(',');
  body_ += "<circle cx=\"" + c.substr(0, comma) + "\" cy=\"" + c.substr(comma + 1) + "\" r=\"" +
           num(radius_px, "%.2f") + "\" fill=\"" + color + "\"/>\n";
}

void SvgCanvas::points(const Polyline<2>& pts, double radius_px, const std::string& color) {
  for (const auto& p : pts) circle(p, radius_px, color);
}

void SvgCanvas::text(const Vec2& at, const std::string& label, double size_px) {
  const auto c = xy(at);
  const auto comma = c.find(',');
  body_ += "<text x=\"" + c.substr(0, comma) + "\" y=\"" + c.substr(comma + 1) + "\" font-family=\"sans-serif\" font-size=\"" +
           num(size_px, "%.1f") + "\">" + label + "</text>\n";
}

void SvgCanvas::frame(const std::string& color) {
  body_ += "<rect x=\"0\" y=\"0\" width=\"" + num(width_, "%.3f") + "\" height=\"" + num(height_, "%.3f") +
           "\" fill=\"none\" stroke=\"" + color + "\"/>\n";
}

std::string SvgCanvas::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_, "%.0f") + "\" height=\"" +
         num(height_, "%.0f") + "\" viewBox=\"0 0 " + num(width_, "%.3f") + " " + num(height_, "%.3f") + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
}

std::string colormap(double t) {
  // Piecewise-linear through a few viridis anchors.
  static const double anchors[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * 4.0;
  const int i = std::min(3, int(t));
  const double f = t - i;
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) rgb[c] = int(std::lround(anchors[i][c] + f * (anchors[i + 1][c] - anchors[i][c])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string lcs_svg(const LcsSet& set, const Vec2& lower, const Vec2& upper) {
  SvgCanvas canvas(lower, upper);
  canvas.frame();
  double qmin = std::numeric_limits<double>::infinity(), qmax = -qmin;
  for (const auto& c : set.candidates) {
    qmin = std::min(qmin, c.q);
    qmax = std::max(qmax, c.q);
  }
  const double span = qmax > qmin ? qmax - qmin : 1.0;
  for (const auto& c : set.candidates) canvas.polyline(c.points, colormap((c.q - qmin) / span), 0.6, 0.6);
  for (const auto& l : set.lines) canvas.polyline(l.points, "#d62728", 2.5);
  for (const auto& p : set.singularities.points) canvas.circle(p, 3.0, "#000000");
  return canvas.str();
}

std::string lines_svg(const std::vector<std::vector<Polyline<2>>>& groups, const std::vector<std::string>& colors,
                      const Vec2& lower, const Vec2& upper) {
  SvgCanvas canvas(lower, upper);
  canvas.frame();
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (const auto& line : groups[g]) canvas.polyline(line, colors[g % colors.size()], 1.5);
  return canvas.str();
}

std::string duffing_blobs_svg(const DuffingBlobResult& result, const DuffingBlobParams& params) {
  static const char* blob_colors[] = {"#1f77b4", "#e6b800", "#d62728"};
  const double half = 3.0 * (params.radii.empty() ? 0.01 : *std::max_element(params.radii.begin(), params.radii.end()));
  const Vec2 lower(-half, -half), upper(half, half);
  const double panel = 300.0, gap = 10.0;
  const std::size_t panels = params.times.size() + 1;
  std::string body;
  for (std::size_t k = 0; k < panels; ++k) {
    SvgCanvas canvas(lower, upper, panel);
    canvas.frame();
    canvas.polyline(k == 0 ? result.stretchline : result.advected[k - 1], "#cc00cc", 1.5);
    for (std::size_t r = 0; r < params.radii.size(); ++r) {
      const auto& pts =
          k == 0 ? result.initial_blobs[r] : result.snapshots[r * params.times.size() + (k - 1)].tracers;
      canvas.points(pts, 0.6, blob_colors[r % 3]);
    }
    canvas.text(Vec2(lower[0] + 0.05 * half, upper[1] - 0.15 * half),
                "t = " + num(k == 0 ? 0.0 : params.times[k - 1], "%g"));
    body += "<g transform=\"translate(" + num(double(k) * (panel + gap), "%.1f") + ",0)\">\n" + canvas.body() + "</g>\n";
  }
  const double width = double(panels) * panel + double(panels - 1) * gap;
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width, "%.0f") + "\" height=\"" +
         num(panel, "%.0f") + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body + "</svg>\n";
}

}  // namespace lcs
