#include "hogkit/overlay.hpp"

#include <algorithm>
#include <cmath>

namespace hogkit {

namespace {

constexpr long kStroke = 2;

}  // namespace

Rgb rank_color(std::size_t rank, std::size_t n) {
  if (n <= 1) return {0, 255, 0};
  const double t = static_cast<double>(std::min(rank, n - 1)) / static_cast<double>(n - 1);
  const auto red = static_cast<std::uint8_t>(std::lround(255.0 * t));
  const auto green = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - t)));
  return {red, green, 0};
}

RgbImage draw_detections(const RgbImage& img, std::span<const Detection> detections) {
  RgbImage out = img;
  const long img_w = static_cast<long>(img.width());
  const long img_h = static_cast<long>(img.height());
  const std::size_t n = detections.size();

  for (std::size_t i = n; i-- > 0;) {
    const Detection& d = detections[i];
    const Rgb color = rank_color(d.rank, n);
    const long x0 = std::max(0L, d.box.x);
    const long y0 = std::max(0L, d.box.y);
    const long x1 = std::min(img_w, d.box.x + d.box.w);  // exclusive
    const long y1 = std::min(img_h, d.box.y + d.box.h);
    for (long y = y0; y < y1; ++y) {
      for (long x = x0; x < x1; ++x) {
        const bool on_stroke = x < d.box.x + kStroke || x >= d.box.x + d.box.w - kStroke ||
                               y < d.box.y + kStroke || y >= d.box.y + d.box.h - kStroke;
        if (!on_stroke) continue;
        std::uint8_t* px = out.pixel(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
        px[0] = color[0];
        px[1] = color[1];
        px[2] = color[2];
      }
    }
  }
  return out;
}

}  // namespace hogkit
