#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hogkit/features.hpp"
#include "hogkit/image.hpp"

namespace hogkit {

enum class AnnotationKind { kPoint, kRect };
enum class Polarity { kPositive, kNegative };

// Point: (x, y) is the window center. Rect: (x, y) is the top-left corner and
// w, h >= 8 its size.
struct Annotation {
  AnnotationKind kind = AnnotationKind::kRect;
  Polarity polarity = Polarity::kPositive;
  long x = 0;
  long y = 0;
  long w = 0;
  long h = 0;
};

inline constexpr std::size_t kDefaultWindowPx = 64;
inline constexpr long kMinRectSide = 8;

// Crops the annotated window and brings it to win_px x win_px. A point takes
// the crop whose top-left is (x - win_px/2, y - win_px/2); a rect is cropped
// and resized with resize_bilinear unless it already has the window size.
// Throws kAnnotation (message names `index`) when the window leaves the image
// and kArgument when a rect side is below 8.
GrayImage extract_patch(const GrayImage& img, const Annotation& ann,
                        std::size_t win_px = kDefaultWindowPx, std::size_t index = 0);

// HOG-space detection template, cell-major and bin-minor like HogGrid.
struct Template {
  std::size_t tcells_x = 0;
  std::size_t tcells_y = 0;
  std::size_t bins = 0;
  std::vector<double> weights;
  double norm = 0.0;

  bool operator==(const Template&) const = default;
};

// Checks the shape and recomputes the norm. Throws kArgument on a length
// mismatch and kDegenerate on a zero norm.
Template make_template(std::size_t tcells_x, std::size_t tcells_y, std::size_t bins,
                       std::vector<double> weights);

// mean(hog(pos)) - mean(hog(neg)); the negative term is skipped when neg is
// empty. Each patch gets its own threshold. Sums run in list order.
// Throws kArgument for no positives or mismatched patch sizes, kDegenerate
// for a zero-norm result.
Template build_template(std::span<const GrayImage> pos, std::span<const GrayImage> neg,
                        const HogParams& params = {});

// "HTPL" + u32 tcells_x, tcells_y, bins + f64 weights, little-endian.
std::vector<std::uint8_t> serialize_template(const Template& t);
Template deserialize_template(std::span<const std::uint8_t> bytes);

void save_template(const Template& t, const std::filesystem::path& path);
Template load_template(const std::filesystem::path& path);

}  // namespace hogkit
