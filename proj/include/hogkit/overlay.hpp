#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "hogkit/detector.hpp"
#include "hogkit/image.hpp"

namespace hogkit {

using Rgb = std::array<std::uint8_t, 3>;

// Linear RGB ramp from green (rank 0) to red (rank n-1); n == 1 is green.
Rgb rank_color(std::size_t rank, std::size_t n);

// Copy of `img` with a 2-pixel outline drawn inside each detection box,
// colored by rank. Lower ranks are drawn last so they stay on top.
RgbImage draw_detections(const RgbImage& img, std::span<const Detection> detections);

}  // namespace hogkit
