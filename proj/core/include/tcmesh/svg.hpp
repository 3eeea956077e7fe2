#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>

namespace tcmesh {

struct PlotSpec {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool reference_line = false;  // slope-1 line through the origin
  int width_px = 640;
  int height_px = 640;
};

// Renders a static scatter chart. Point markers carry class="pt" and the
// reference line class="ref" so emitted coordinates can be checked
// programmatically. Throws Error{invalid_argument} on non-finite input.
std::string render_svg_scatter(std::span<const std::pair<double, double>> points,
                               const PlotSpec& spec);

void emit_svg_scatter(std::span<const std::pair<double, double>> points,
                      const PlotSpec& spec, const std::filesystem::path& path);

}  // namespace tcmesh
