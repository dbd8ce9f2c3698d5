#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morpho/objectives.hpp"

namespace morpho {

enum class Axis { Alpha, Lambda, Size };

/// Parses "alpha", "lambda" or "size"; nullopt otherwise.
std::optional<Axis> parse_axis(std::string_view name);
std::string_view axis_label(Axis axis);
double axis_value(const ObjectiveVector& o, Axis axis);

struct ScatterPoint {
  ObjectiveVector objectives;
  int n_props = 0;
};

/// Standalone SVG scatter of one objective pair, colored by propeller count.
/// The optional baseline is drawn as a cross.
std::string scatter_svg(const std::vector<ScatterPoint>& points, Axis x, Axis y,
                        const std::optional<ObjectiveVector>& baseline);

}  // namespace morpho
