#pragma once

#include <string>

#include "gasketwalk/potential.hpp"
#include "gasketwalk/words.hpp"

namespace gasket {

struct GasketRenderConfig {
  int depth = 4;       // number of subdivision levels, at most 8
  Letter color_by = 1; // which harmonic function colors the vertices
  double tol = 1e-6;   // harmonic evaluation tolerance
  int size_px = 800;
};

/// Renders the subdivided gasket as SVG. Each depth-cell becomes one
/// triangle; vertices carry the harmonic value h_i at the matching boundary
/// word and are colored by linear sRGB interpolation between #123a5c
/// (h = 0) and #f7c948 (h = 3). Output bytes depend only on the config.
std::string render_gasket_svg(BoundaryEvaluator& eval, const GasketRenderConfig& config);

}  // namespace gasket
