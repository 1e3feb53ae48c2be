#pragma once

#include <cstddef>

#include "hogkit/features.hpp"
#include "hogkit/image.hpp"

namespace hogkit {

struct GlyphConfig {
  // Output pixels per cell side; odd and >= 3 so every cell has a center.
  std::size_t glyph_size = 15;
  double gamma = 1.0;
};

// Line-glyph rendering of a HOG grid. Each positive bin of a cell draws a
// segment of glyph_size - 2 pixels through the cell center, perpendicular to
// the bin's center angle, at intensity (value / grid max)^gamma. Overlaps add
// and the result is clamped to 1. Non-positive bins draw nothing.
// Throws kArgument for an invalid config.
GrayImage render_glyphs(const HogGrid& grid, const GlyphConfig& cfg = {});

}  // namespace hogkit
