#include "helpers.hpp"

#include "lcs/output.hpp"

#include <fstream>
#include <limits>
#include <sstream>

using namespace lcs;

TEST_CASE("polyline csv") {
  const std::vector<Polyline<2>> lines{{Vec2(0, 0), Vec2(3, 4)}, {Vec2(1, 1)}};
  std::ostringstream out;
  write_polylines_csv<2>(out, lines);
  CHECK(out.str() == "line_id,s,x1,x2\n0,0,0,0\n0,5,3,4\n1,0,1,1\n");

  std::ostringstream out3;
  write_polylines_csv<3>(out3, {{Vec3(0.5, 0, 0)}});
  CHECK(out3.str() == "line_id,s,x1,x2,x3\n0,0,0.5,0,0\n");
}

TEST_CASE("csv round-trips doubles exactly") {
  const double v = 0.1 + 0.2;
  std::ostringstream out;
  write_polylines_csv<2>(out, {{Vec2(v, -1.0 / 3.0)}});
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  const auto comma = row.rfind(',');
  const auto prev = row.rfind(',', comma - 1);
  CHECK(std::stod(row.substr(prev + 1, comma - prev - 1)) == v);
  CHECK(std::stod(row.substr(comma + 1)) == -1.0 / 3.0);
}

TEST_CASE("ftle csv") {
  const auto f = testing::zero_field_2d(2.0);
  const auto cg = cauchy_green<2>(compute_flow_map<2>(*f, {3, 3}, 0.0, 1.0, IntegratorParams{}, {},
                                                      Domain<2>(Vec2(-1, -1), Vec2(1, 1))));
  std::ostringstream out;
  write_ftle_csv<2>(out, cg);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x1,x2,ftle");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows == 9);
}

TEST_CASE("line and report json") {
  EigenLine line;
  line.kind = LineKind::Stretchline;
  line.seed = Vec2(0.5, 0.25);
  line.points = {Vec2(0, 0.25), Vec2(0.5, 0.25), Vec2(1, 0.25)};
  line.seed_index = 1;
  line.stop_fwd = StopReason::Boundary;
  line.stop_bwd = StopReason::Singularity;
  line.length = 1.0;
  line.q = std::numeric_limits<double>::quiet_NaN();
  const json j = to_json(line);
  CHECK(j["kind"] == "stretchline");
  CHECK(j["stop_backward"] == "singularity");
  CHECK(j["q"].is_null());
  CHECK(j["points"].size() == 3);
  CHECK(j["points"][2][0] == 1.0);

  CheckStats s;
  s.tol = 1.0;
  s.add(0.5);
  s.finish();
  const json js = to_json(s);
  CHECK(js["count"] == 1);
  CHECK(js["pass_fraction"] == 1.0);
  CHECK(js["tol"] == 1.0);

  Lemma1Report r;
  r.top = s;
  r.bottom = s;
  CHECK(to_json(r).dump() == to_json(r).dump());
}

TEST_CASE("svg is deterministic") {
  const std::vector<std::vector<Polyline<2>>> groups{{{Vec2(0, 0), Vec2(1, 1)}}, {{Vec2(0.5, 0), Vec2(0.5, 1)}}};
  const auto a = lines_svg(groups, {"#ff0000", "#0000ff"}, Vec2(0, 0), Vec2(2, 1));
  const auto b = lines_svg(groups, {"#ff0000", "#0000ff"}, Vec2(0, 0), Vec2(2, 1));
  CHECK(a == b);
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(a.find("#ff0000") != std::string::npos);

  SvgCanvas canvas(Vec2(0, 0), Vec2(2, 1), 400.0);
  CHECK(canvas.width() == 400.0);
  CHECK(canvas.height() == 200.0);
  canvas.circle(Vec2(0, 0), 3.0, "#000000");
  // y points up in data coordinates, down in SVG coordinates.
  CHECK(canvas.body().find("cy=\"200") != std::string::npos);
}

TEST_CASE("colormap endpoints differ and clamp") {
  CHECK(colormap(0.0) != colormap(1.0));
  CHECK(colormap(-1.0) == colormap(0.0));
  CHECK(colormap(2.0) == colormap(1.0));
  CHECK(colormap(0.5).size() == 7);
}

TEST_CASE("write text") {
  testing::TempDir dir("output");
  write_text(dir / "a.txt", "hello\n");
  std::ifstream in(dir / "a.txt", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "hello\n");
}
