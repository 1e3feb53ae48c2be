#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "hogkit/image.hpp"

namespace hogkit {

// Per-pixel centered-difference gradient. All planes are row-major with the
// image's dimensions.
struct GradientField {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> gx;
  std::vector<double> gy;
  std::vector<double> mag;
  // atan2(gy, gx) in (-pi, pi]; 0 where mag == 0.
  std::vector<double> theta;
};

// Unscaled [-1 0 1] stencil in x and y, no smoothing. The one-pixel border is
// zero.
GradientField compute_gradient(const GrayImage& img);

// Orientation bin of `theta` among `bins` equal half-open sectors starting at
// -pi; theta == pi falls in the last bin. Accepts [-pi, pi].
// Throws kArgument for bins == 0 or theta outside [-pi, pi].
std::size_t orientation_bin(double theta, std::size_t bins);

// Lower edge of sector k, i.e. -pi + k * 2pi / bins.
double bin_edge(std::size_t k, std::size_t bins);

// Center angle of sector k.
double bin_center(std::size_t k, std::size_t bins);

struct HogParams {
  std::size_t cell_size = 8;
  std::size_t bins = 9;
  // Votes need mag > tau * max(mag).
  double tau = 0.10;
  // When set, used as the absolute magnitude cutoff instead of tau * max.
  std::optional<double> fixed_threshold;
  bool normalize = false;
  double epsilon = 1e-6;
};

// Cell lattice of orientation histograms. hist is cell-major, bin-minor:
// hist[(cy * cells_x + cx) * bins + k].
struct HogGrid {
  std::size_t cells_x = 0;
  std::size_t cells_y = 0;
  std::size_t bins = 0;
  std::size_t cell_size = 0;
  double threshold_used = 0.0;
  std::vector<double> hist;

  std::span<const double> cell(std::size_t cx, std::size_t cy) const {
    return std::span<const double>(hist).subspan((cy * cells_x + cx) * bins, bins);
  }
  double at(std::size_t cx, std::size_t cy, std::size_t k) const {
    return hist[(cy * cells_x + cx) * bins + k];
  }

  bool operator==(const HogGrid&) const = default;
};

// Counts, per complete cell and bin, the pixels whose magnitude is strictly
// above the threshold. Partial cells at the right/bottom are dropped.
// Throws kEmptyGrid if no complete cell fits, kArgument on bad parameters.
HogGrid compute_hog(const GradientField& field, const HogParams& params = {});

// Gradient + histogram (+ normalize_cells when params.normalize).
HogGrid compute_hog(const GrayImage& img, const HogParams& params = {});

// v / sqrt(|v|^2 + epsilon^2) per cell.
HogGrid normalize_cells(const HogGrid& grid, double epsilon = 1e-6);

// "HOG1" + u32 cells_x, cells_y, bins, cell_size + f64 threshold_used +
// f64 hist, all little-endian.
std::vector<std::uint8_t> serialize_hog(const HogGrid& grid);
HogGrid deserialize_hog(std::span<const std::uint8_t> bytes);

void save_hog(const HogGrid& grid, const std::filesystem::path& path);
HogGrid load_hog(const std::filesystem::path& path);

}  // namespace hogkit
