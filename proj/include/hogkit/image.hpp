#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace hogkit {

// Luminance image, samples in [0,1], row-major, origin at the top-left pixel.
class GrayImage {
 public:
  GrayImage() = default;
  // Filled with `value`. Throws kArgument on a zero dimension.
  GrayImage(std::size_t width, std::size_t height, double value = 0.0);
  // Throws kArgument if data.size() != width*height or a sample is outside
  // [0,1] (NaN included).
  GrayImage(std::size_t width, std::size_t height, std::vector<double> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }

  double at(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }
  // Caller keeps samples in [0,1].
  double& at(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

// 8-bit interleaved RGB image, row-major.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(std::size_t width, std::size_t height);
  // Throws kArgument if data.size() != 3*width*height.
  RgbImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }

  std::uint8_t* pixel(std::size_t x, std::size_t y) {
    return &data_[3 * (y * width_ + x)];
  }
  const std::uint8_t* pixel(std::size_t x, std::size_t y) const {
    return &data_[3 * (y * width_ + x)];
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> data_;
};

inline constexpr double kLumaR = 0.2989;
inline constexpr double kLumaG = 0.5870;
inline constexpr double kLumaB = 0.1140;

// Decodes binary PGM (P5), binary PPM (P6) or PNG, detected from the file
// content. PGM is replicated across the three channels.
// Throws kIo when unreadable and kDecode on malformed data.
RgbImage load_image(const std::filesystem::path& path);

// Same, from an in-memory buffer. Decode errors name the byte offset.
RgbImage decode_image(std::span<const std::uint8_t> bytes);

// Format chosen by extension: .pgm, .ppm or .png. Gray samples are quantized
// to round(255*s). RGB to .pgm is rejected, gray to .ppm is replicated.
void save_image(const GrayImage& img, const std::filesystem::path& path);
void save_image(const RgbImage& img, const std::filesystem::path& path);

GrayImage to_gray(const RgbImage& img);

// Gray -> RGB by replicating round(255*s).
RgbImage to_rgb(const GrayImage& img);

// Bilinear resampling with pixel centers at (i + 0.5). An exact halving in
// both dimensions uses a 2x2 box average instead.
GrayImage resize_bilinear(const GrayImage& img, std::size_t new_width,
                          std::size_t new_height);

// Sub-rectangle copy. Throws kArgument if the rectangle leaves the image.
GrayImage crop(const GrayImage& img, std::size_t x, std::size_t y,
               std::size_t width, std::size_t height);

}  // namespace hogkit
