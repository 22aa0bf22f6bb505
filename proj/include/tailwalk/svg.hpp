// svg.hpp — static SVG plots: fidelity/M curves and point-spectrum dot plots.
#pragma once

#include <string>
#include <vector>

#include "tailwalk/jost.hpp"
#include "tailwalk/propagate.hpp"

namespace tailwalk {

// Line plot of values vs times with an optional dashed marker at marker_t
// (skipped when NaN or out of range).
std::string render_curve_svg(const std::vector<double>& times, const std::vector<double>& values,
                             double marker_t, const std::string& y_label);

std::string render_curve_svg(const FidelityCurve& curve, double marker_t);

// Dot plot of eigenvalues on a horizontal axis with the band [-2,2] shaded.
std::string render_spectrum_svg(const std::vector<BoundState>& states);

}  // namespace tailwalk
