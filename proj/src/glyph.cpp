#include "hogkit/glyph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "hogkit/error.hpp"
#include "hogkit/parallel.hpp"

namespace hogkit {

namespace {

struct Offset {
  long dx;
  long dy;
};

// Pixels of the segment from center - (dx,dy) to center + (dx,dy), relative to
// the center. Walks the major axis; the minor coordinate is rounded to nearest
// with exact ties going to the smaller value.
std::vector<Offset> rasterize(long dx, long dy) {
  std::vector<Offset> px;
  const bool x_major = std::labs(dx) >= std::labs(dy);
  const long major = x_major ? dx : dy;
  const long minor = x_major ? dy : dx;
  const long span = std::labs(major);
  if (span == 0) {
    px.push_back({0, 0});
    return px;
  }
  const long step = major > 0 ? 1 : -1;
  for (long t = -span; t <= span; ++t) {
    // minor coordinate at this step is t * minor / span.
    const long num = t * minor;
    const long den = span;
    // floor((2*num + den - 1) / (2*den)) with floor division.
    const long a = 2 * num + den - 1;
    const long b = 2 * den;
    long m = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --m;
    const long major_coord = t * step;
    px.push_back(x_major ? Offset{major_coord, m} : Offset{m, major_coord});
  }
  return px;
}

}  // namespace

GrayImage render_glyphs(const HogGrid& grid, const GlyphConfig& cfg) {
  if (cfg.glyph_size < 3 || cfg.glyph_size % 2 == 0) {
    throw Error(ErrorCode::kArgument, "glyph size must be odd and >= 3");
  }
  if (!(cfg.gamma > 0.0)) throw Error(ErrorCode::kArgument, "gamma must be > 0");
  if (grid.cells_x == 0 || grid.cells_y == 0 || grid.bins == 0) {
    throw Error(ErrorCode::kEmptyGrid, "cannot render an empty grid");
  }

  const std::size_t gs = cfg.glyph_size;
  const std::size_t out_w = grid.cells_x * gs;
  const std::size_t out_h = grid.cells_y * gs;
  GrayImage out(out_w, out_h, 0.0);

  double max_bin = 0.0;
  for (double v : grid.hist) max_bin = std::max(max_bin, v);
  if (max_bin <= 0.0) return out;

  // One precomputed stroke per bin.
  const long half = static_cast<long>(gs - 3) / 2;
  std::vector<std::vector<Offset>> strokes(grid.bins);
  for (std::size_t k = 0; k < grid.bins; ++k) {
    const double angle = bin_center(k, grid.bins) + std::numbers::pi / 2.0;
    const long dx = std::lround(half * std::cos(angle));
    const long dy = std::lround(half * std::sin(angle));
    strokes[k] = rasterize(dx, dy);
  }

  const long center = static_cast<long>(gs - 1) / 2;
  auto data = out.data();
  parallel_for(0, grid.cells_y, [&](std::size_t cy) {
    for (std::size_t cx = 0; cx < grid.cells_x; ++cx) {
      const auto cell = grid.cell(cx, cy);
      const long ox = static_cast<long>(cx * gs) + center;
      const long oy = static_cast<long>(cy * gs) + center;
      for (std::size_t k = 0; k < grid.bins; ++k) {
        if (!(cell[k] > 0.0)) continue;
        const double intensity = std::pow(cell[k] / max_bin, cfg.gamma);
        for (const Offset& o : strokes[k]) {
          data[static_cast<std::size_t>(oy + o.dy) * out_w + static_cast<std::size_t>(ox + o.dx)] +=
              intensity;
        }
      }
      for (std::size_t y = cy * gs; y < (cy + 1) * gs; ++y) {
        for (std::size_t x = cx * gs; x < (cx + 1) * gs; ++x) {
          data[y * out_w + x] = std::min(data[y * out_w + x], 1.0);
        }
      }
    }
  });
  return out;
}

}  // namespace hogkit
