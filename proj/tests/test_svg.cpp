#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tcmesh/error.hpp"
#include "tcmesh/svg.hpp"

using namespace tcmesh;

namespace {

double attr(const std::string& element, const std::string& name) {
  const auto pos = element.find(name + "=\"");
  REQUIRE(pos != std::string::npos);
  const auto start = pos + name.size() + 2;
  const auto end = element.find('"', start);
  return std::stod(element.substr(start, end - start));
}

std::vector<std::string> elements_with(const std::string& svg, const std::string& needle) {
  std::vector<std::string> found;
  std::size_t pos = 0;
  while ((pos = svg.find(needle, pos)) != std::string::npos) {
    const auto start = svg.rfind('<', pos);
    const auto end = svg.find('>', pos);
    found.push_back(svg.substr(start, end - start + 1));
    pos = end;
  }
  return found;
}

}  // namespace

TEST_CASE("zero points render a valid frame-only document") {
  const std::string svg = render_svg_scatter({}, PlotSpec{});
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("class=\"pt\"") == std::string::npos);
  CHECK(!elements_with(svg, "<rect").empty());
}

TEST_CASE("points on the identity line land on the rendered reference line") {
  const std::vector<std::pair<double, double>> points{{-0.4, -0.4}, {0.1, 0.1}, {0.75, 0.75}};
  PlotSpec spec;
  spec.reference_line = true;
  const std::string svg = render_svg_scatter(points, spec);

  const auto refs = elements_with(svg, "class=\"ref\"");
  REQUIRE(refs.size() == 1);
  const double x1 = attr(refs[0], "x1");
  const double y1 = attr(refs[0], "y1");
  const double x2 = attr(refs[0], "x2");
  const double y2 = attr(refs[0], "y2");
  const double slope = (y2 - y1) / (x2 - x1);

  const auto circles = elements_with(svg, "class=\"pt\"");
  REQUIRE(circles.size() == points.size());
  for (const auto& circle : circles) {
    const double cx = attr(circle, "cx");
    const double cy = attr(circle, "cy");
    const double on_line = y1 + slope * (cx - x1);
    CHECK(std::fabs(cy - on_line) < 0.1);  // coordinates printed at 0.01 px
  }
}

TEST_CASE("off-line points do not satisfy the reference-line equation") {
  const std::vector<std::pair<double, double>> points{{-0.5, 0.5}, {0.5, -0.5}, {0.0, 0.9}};
  PlotSpec spec;
  spec.reference_line = true;
  const std::string svg = render_svg_scatter(points, spec);
  const auto refs = elements_with(svg, "class=\"ref\"");
  REQUIRE(refs.size() == 1);
  const double x1 = attr(refs[0], "x1");
  const double y1 = attr(refs[0], "y1");
  const double x2 = attr(refs[0], "x2");
  const double y2 = attr(refs[0], "y2");
  const double slope = (y2 - y1) / (x2 - x1);
  for (const auto& circle : elements_with(svg, "class=\"pt\"")) {
    const double cx = attr(circle, "cx");
    const double cy = attr(circle, "cy");
    CHECK(std::fabs(cy - (y1 + slope * (cx - x1))) > 5.0);
  }
}

TEST_CASE("non-finite coordinates are rejected before rendering") {
  const std::vector<std::pair<double, double>> points{{0.0, std::nan("")}};
  try {
    render_svg_scatter(points, PlotSpec{});
    FAIL("expected Error");
  } catch (const Error& error) {
    CHECK(error.code() == ErrorCode::invalid_argument);
  }
  const std::vector<std::pair<double, double>> inf_points{
      {std::numeric_limits<double>::infinity(), 1.0}};
  CHECK_THROWS_AS(render_svg_scatter(inf_points, PlotSpec{}), Error);
}

TEST_CASE("labels are XML-escaped") {
  PlotSpec spec;
  spec.title = "a < b & c";
  const std::string svg = render_svg_scatter({}, spec);
  CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(svg.find("a < b & c") == std::string::npos);
}

TEST_CASE("emit writes the rendered document to disk") {
  const auto path = std::filesystem::temp_directory_path() / "tcmesh_test_plot.svg";
  std::filesystem::remove(path);
  const std::vector<std::pair<double, double>> points{{1.0, 2.0}};
  emit_svg_scatter(points, PlotSpec{}, path);
  CHECK(std::filesystem::exists(path));
  CHECK(std::filesystem::file_size(path) > 100);
  std::filesystem::remove(path);
}
