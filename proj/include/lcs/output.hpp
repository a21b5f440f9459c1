#pragma once

#include "lcs/demos.hpp"
#include "lcs/verify.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace lcs {

using json = nlohmann::json;

/// One vertex per row: line_id,s,x1..xn (s is cumulative arclength).
template <int Dim>
void write_polylines_csv(std::ostream& out, const std::vector<Polyline<Dim>>& lines);

/// Per-node FTLE as x1,..,xn,ftle (empty value at invalid nodes).
template <int Dim>
void write_ftle_csv(std::ostream& out, const CGField<Dim>& cg);

json to_json(const EigenLine& line);
json to_json(const std::vector<EigenLine>& lines);
json to_json(const LcsSet& set);
json to_json(const CheckStats& stats);
json to_json(const Lemma1Report& report);
json to_json(const Theorem1Report& report);
json to_json(const DuffingBlobResult& result);
json to_json(const AbcPlaneResult& result);
json to_json(const InstabilityResult& result);

std::vector<Polyline<2>> polylines_of(const std::vector<EigenLine>& lines);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Minimal deterministic SVG canvas in data coordinates (y up).
class SvgCanvas {
 public:
  SvgCanvas(const Vec2& lower, const Vec2& upper, double width_px = 800.0);
  void polyline(const Polyline<2>& points, const std::string& color, double width = 1.0, double opacity = 1.0);
  void circle(const Vec2& center, double radius_px, const std::string& color);
  void points(const Polyline<2>& points, double radius_px, const std::string& color);
  void text(const Vec2& at, const std::string& label, double size_px = 14.0);
  void frame(const std::string& color = "#444444");
  std::string str() const;
  std::string body() const { return body_; }
  double width() const { return width_; }
  double height() const { return height_; }

 private:
  std::string xy(const Vec2& p) const;
  Vec2 lower_, upper_;
  double width_, height_, scale_;
  std::string body_;
};

/// Perceptually ordered colour for t in [0, 1].
std::string colormap(double t);

/// Stretchlines or strainlines coloured by q, selected LCSs highlighted, singularities marked.
std::string lcs_svg(const LcsSet& set, const Vec2& lower, const Vec2& upper);

/// Lines in one colour (optionally several groups), with the domain frame.
std::string lines_svg(const std::vector<std::vector<Polyline<2>>>& groups, const std::vector<std::string>& colors,
                      const Vec2& lower, const Vec2& upper);

/// Side-by-side panels of the Duffing blob demo (t = 0 and each advection time).
std::string duffing_blobs_svg(const DuffingBlobResult& result, const DuffingBlobParams& params);

}  // namespace lcs
