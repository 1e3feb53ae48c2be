#include "hogkit/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "binio.hpp"
#include "hogkit/error.hpp"
#include "hogkit/parallel.hpp"

namespace hogkit {

namespace {

constexpr double kPi = std::numbers::pi;

void check_params(const HogParams& p) {
  if (p.cell_size == 0) throw Error(ErrorCode::kArgument, "cell_size must be >= 1");
  if (p.bins == 0) throw Error(ErrorCode::kArgument, "bins must be >= 1");
  if (!(p.tau >= 0.0 && p.tau <= 1.0)) throw Error(ErrorCode::kArgument, "tau must be in [0,1]");
  if (p.fixed_threshold && !(*p.fixed_threshold >= 0.0)) {
    throw Error(ErrorCode::kArgument, "fixed threshold must be >= 0");
  }
}

}  // namespace

GradientField compute_gradient(const GrayImage& img) {
  GradientField f;
  f.width = img.width();
  f.height = img.height();
  const std::size_t n = f.width * f.height;
  f.gx.assign(n, 0.0);
  f.gy.assign(n, 0.0);
  f.mag.assign(n, 0.0);
  f.theta.assign(n, 0.0);
  if (f.width < 3 || f.height < 3) return f;

  const std::size_t w = f.width;
  const auto px = img.data();
  parallel_for(1, f.height - 1, [&](std::size_t y) {
    for (std::size_t x = 1; x + 1 < w; ++x) {
      const std::size_t i = y * w + x;
      const double gx = px[i + 1] - px[i - 1];
      const double gy = px[i + w] - px[i - w];
      const double mag = std::sqrt(gx * gx + gy * gy);
      f.gx[i] = gx;
      f.gy[i] = gy;
      f.mag[i] = mag;
      if (mag > 0.0) {
        const double t = std::atan2(gy, gx);
        // atan2(-0, negative) yields -pi; the range is (-pi, pi].
        f.theta[i] = (t == -kPi) ? kPi : t;
      }
    }
  });
  return f;
}

double bin_edge(std::size_t k, std::size_t bins) {
  return -kPi + static_cast<double>(k) * (2.0 * kPi / static_cast<double>(bins));
}

double bin_center(std::size_t k, std::size_t bins) {
  return -kPi + (static_cast<double>(k) + 0.5) * (2.0 * kPi / static_cast<double>(bins));
}

std::size_t orientation_bin(double theta, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::kArgument, "bins must be >= 1");
  if (!(theta >= -kPi && theta <= kPi)) {
    throw Error(ErrorCode::kArgument, "orientation outside [-pi, pi]: " + std::to_string(theta));
  }
  const double width = 2.0 * kPi / static_cast<double>(bins);
  auto k = static_cast<std::size_t>(std::floor((theta + kPi) / width));
  k = std::min(k, bins - 1);
  // The division can land one sector off near an edge; settle against the
  // edges as bin_edge computes them so the partition is exact.
  if (k + 1 < bins && theta >= bin_edge(k + 1, bins)) ++k;
  if (k > 0 && theta < bin_edge(k, bins)) --k;
  return k;
}

HogGrid compute_hog(const GradientField& field, const HogParams& params) {
  check_params(params);
  const std::size_t cs = params.cell_size;
  const std::size_t bins = params.bins;
  HogGrid grid;
  grid.cells_x = field.width / cs;
  grid.cells_y = field.height / cs;
  grid.bins = bins;
  grid.cell_size = cs;
  if (grid.cells_x == 0 || grid.cells_y == 0) {
    throw Error(ErrorCode::kEmptyGrid, "image " + std::to_string(field.width) + "x" +
                                           std::to_string(field.height) +
                                           " is smaller than one " + std::to_string(cs) +
                                           "-pixel cell");
  }

  if (params.fixed_threshold) {
    grid.threshold_used = *params.fixed_threshold;
  } else {
    const double max_mag =
        field.mag.empty() ? 0.0 : *std::max_element(field.mag.begin(), field.mag.end());
    grid.threshold_used = params.tau * max_mag;
  }
  const double threshold = grid.threshold_used;

  grid.hist.assign(grid.cells_x * grid.cells_y * bins, 0.0);
  const std::size_t w = field.width;
  parallel_for(0, grid.cells_y, [&](std::size_t cy) {
    for (std::size_t y = cy * cs; y < (cy + 1) * cs; ++y) {
      for (std::size_t cx = 0; cx < grid.cells_x; ++cx) {
        double* cell = &grid.hist[(cy * grid.cells_x + cx) * bins];
        for (std::size_t x = cx * cs; x < (cx + 1) * cs; ++x) {
          const std::size_t i = y * w + x;
          if (field.mag[i] > threshold) cell[orientation_bin(field.theta[i], bins)] += 1.0;
        }
      }
    }
  });
  return grid;
}

HogGrid compute_hog(const GrayImage& img, const HogParams& params) {
  check_params(params);
  HogGrid grid = compute_hog(compute_gradient(img), params);
  if (params.normalize) grid = normalize_cells(grid, params.epsilon);
  return grid;
}

HogGrid normalize_cells(const HogGrid& grid, double epsilon) {
  HogGrid out = grid;
  const double eps2 = epsilon * epsilon;
  for (std::size_t c = 0; c < grid.cells_x * grid.cells_y; ++c) {
    double* v = &out.hist[c * grid.bins];
    double sq = 0.0;
    for (std::size_t k = 0; k < grid.bins; ++k) sq += v[k] * v[k];
    const double denom = std::sqrt(sq + eps2);
    if (denom == 0.0) continue;  // zero cell with epsilon == 0
    for (std::size_t k = 0; k < grid.bins; ++k) v[k] /= denom;
  }
  return out;
}

std::vector<std::uint8_t> serialize_hog(const HogGrid& grid) {
  binio::Writer w;
  w.magic("HOG1");
  w.u32(static_cast<std::uint32_t>(grid.cells_x));
  w.u32(static_cast<std::uint32_t>(grid.cells_y));
  w.u32(static_cast<std::uint32_t>(grid.bins));
  w.u32(static_cast<std::uint32_t>(grid.cell_size));
  w.f64(grid.threshold_used);
  for (double v : grid.hist) w.f64(v);
  return w.take();
}

HogGrid deserialize_hog(std::span<const std::uint8_t> bytes) {
  binio::Reader r(bytes, "HOG file");
  r.expect_magic("HOG1");
  HogGrid grid;
  grid.cells_x = r.u32();
  grid.cells_y = r.u32();
  grid.bins = r.u32();
  grid.cell_size = r.u32();
  grid.threshold_used = r.f64();
  if (grid.bins == 0 || grid.cell_size == 0) {
    throw Error(ErrorCode::kFormat, "HOG file: bins and cell_size must be nonzero");
  }
  const std::size_t count = grid.cells_x * grid.cells_y * grid.bins;
  if (r.remaining() != count * 8) {
    throw Error(ErrorCode::kFormat, "HOG file: payload is " + std::to_string(r.remaining()) +
                                        " bytes, header implies " + std::to_string(count * 8));
  }
  grid.hist.resize(count);
  for (double& v : grid.hist) v = r.f64();
  r.expect_end();
  return grid;
}

void save_hog(const HogGrid& grid, const std::filesystem::path& path) {
  binio::write_file(path, serialize_hog(grid));
}

HogGrid load_hog(const std::filesystem::path& path) {
  return deserialize_hog(binio::read_file(path));
}

}  // namespace hogkit
