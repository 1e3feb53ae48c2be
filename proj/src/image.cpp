#include "hogkit/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "hogkit/error.hpp"

namespace hogkit {

namespace {

[[noreturn]] void decode_error(std::size_t offset, const std::string& msg) {
  throw Error(ErrorCode::kDecode,
              "decode error at byte " + std::to_string(offset) + ": " + msg);
}

std::uint8_t quantize(double s) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(s, 0.0, 1.0) * 255.0));
}

// Minimal cursor over a PNM header.
class PnmReader {
 public:
  explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_uint(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::size_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > (1u << 24)) decode_error(start, std::string(field) + " too large");
      ++pos_;
    }
    if (pos_ == start) decode_error(start, std::string("expected ") + field);
    return v;
  }

  // Exactly one whitespace byte separates the header from the payload.
  void end_header() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      decode_error(pos_, "expected whitespace after maxval");
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

RgbImage decode_pnm(std::span<const std::uint8_t> bytes) {
  const bool gray = bytes[1] == '5';
  PnmReader reader(bytes);
  const std::size_t width = reader.read_uint("width");
  const std::size_t height = reader.read_uint("height");
  const std::size_t maxval_at = reader.offset();
  const std::size_t maxval = reader.read_uint("maxval");
  if (width == 0 || height == 0) decode_error(maxval_at, "zero image dimension");
  if (maxval != 255) decode_error(maxval_at, "unsupported maxval " + std::to_string(maxval));
  reader.end_header();

  const std::size_t channels = gray ? 1 : 3;
  const std::size_t need = width * height * channels;
  const std::size_t have = bytes.size() - reader.offset();
  if (have < need) {
    decode_error(bytes.size(), "truncated payload, expected " + std::to_string(need) +
                                   " bytes, found " + std::to_string(have));
  }
  const auto* payload = bytes.data() + reader.offset();
  std::vector<std::uint8_t> rgb(3 * width * height);
  if (gray) {
    for (std::size_t i = 0; i < width * height; ++i) {
      rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = payload[i];
    }
  } else {
    std::memcpy(rgb.data(), payload, need);
  }
  return RgbImage(width, height, std::move(rgb));
}

RgbImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    decode_error(0, std::string("png: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    decode_error(0, "png: " + msg);
  }
  return RgbImage(image.width, image.height, std::move(rgb));
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

void write_file(const std::filesystem::path& path, const std::string& header,
                std::span<const std::uint8_t> payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open for writing: " + path.string());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

void write_png(const std::filesystem::path& path, std::size_t width,
               std::size_t height, bool gray, const std::uint8_t* pixels) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels, 0, nullptr)) {
    throw Error(ErrorCode::kIo, "png write failed for " + path.string() + ": " + image.message);
  }
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, double value)
    : width_(width), height_(height) {
  if (width == 0 || height == 0) throw Error(ErrorCode::kArgument, "image dimensions must be >= 1");
  if (!(value >= 0.0 && value <= 1.0)) throw Error(ErrorCode::kArgument, "sample outside [0,1]");
  data_.assign(width * height, value);
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width == 0 || height == 0) throw Error(ErrorCode::kArgument, "image dimensions must be >= 1");
  if (data_.size() != width * height) {
    throw Error(ErrorCode::kArgument, "gray data length does not match width*height");
  }
  for (double s : data_) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::kArgument, "sample outside [0,1]");
  }
}

RgbImage::RgbImage(std::size_t width, std::size_t height)
    : width_(width), height_(height) {
  if (width == 0 || height == 0) throw Error(ErrorCode::kArgument, "image dimensions must be >= 1");
  data_.assign(3 * width * height, 0);
}

RgbImage::RgbImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width == 0 || height == 0) throw Error(ErrorCode::kArgument, "image dimensions must be >= 1");
  if (data_.size() != 3 * width * height) {
    throw Error(ErrorCode::kArgument, "rgb data length does not match 3*width*height");
  }
}

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngSig, kPngSig + 8, bytes.begin())) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
    return decode_pnm(bytes);
  }
  decode_error(0, "unrecognized image signature (expected P5, P6 or PNG)");
}

RgbImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path.string());
  try {
    return decode_image(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
  if (img.empty()) throw Error(ErrorCode::kArgument, "cannot save an empty image");
  const std::string ext = lower_extension(path);
  if (ext == ".ppm") {
    save_image(to_rgb(img), path);
    return;
  }
  std::vector<std::uint8_t> px(img.data().size());
  std::transform(img.data().begin(), img.data().end(), px.begin(), quantize);
  if (ext == ".pgm") {
    write_file(path,
               "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n",
               px);
  } else if (ext == ".png") {
    write_png(path, img.width(), img.height(), true, px.data());
  } else {
    throw Error(ErrorCode::kArgument, "unsupported output extension: " + path.string());
  }
}

void save_image(const RgbImage& img, const std::filesystem::path& path) {
  if (img.width() == 0) throw Error(ErrorCode::kArgument, "cannot save an empty image");
  const std::string ext = lower_extension(path);
  if (ext == ".ppm") {
    write_file(path,
               "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n",
               img.data());
  } else if (ext == ".png") {
    write_png(path, img.width(), img.height(), false, img.data().data());
  } else {
    throw Error(ErrorCode::kArgument,
                "unsupported output extension for a color image: " + path.string());
  }
}

GrayImage to_gray(const RgbImage& img) {
  std::vector<double> out(img.width() * img.height());
  const auto rgb = img.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (kLumaR * rgb[3 * i] + kLumaG * rgb[3 * i + 1] + kLumaB * rgb[3 * i + 2]) / 255.0;
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

RgbImage to_rgb(const GrayImage& img) {
  std::vector<std::uint8_t> out(3 * img.data().size());
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    out[3 * i] = out[3 * i + 1] = out[3 * i + 2] = quantize(img.data()[i]);
  }
  return RgbImage(img.width(), img.height(), std::move(out));
}

GrayImage resize_bilinear(const GrayImage& img, std::size_t new_width,
                          std::size_t new_height) {
  if (new_width == 0 || new_height == 0) {
    throw Error(ErrorCode::kArgument, "resize target dimensions must be >= 1");
  }
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  std::vector<double> out(new_width * new_height);

  if (2 * new_width == w && 2 * new_height == h) {
    for (std::size_t y = 0; y < new_height; ++y) {
      for (std::size_t x = 0; x < new_width; ++x) {
        const double sum = img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) +
                           img.at(2 * x, 2 * y + 1) + img.at(2 * x + 1, 2 * y + 1);
        out[y * new_width + x] = 0.25 * sum;
      }
    }
    return GrayImage(new_width, new_height, std::move(out));
  }

  // Source coordinate of each destination center, clamped to the sample grid.
  struct Tap {
    std::size_t i0, i1;
    double frac;
  };
  auto taps = [](std::size_t src, std::size_t dst) {
    std::vector<Tap> t(dst);
    const double ratio = static_cast<double>(src) / static_cast<double>(dst);
    for (std::size_t i = 0; i < dst; ++i) {
      const double s = std::clamp((static_cast<double>(i) + 0.5) * ratio - 0.5, 0.0,
                                  static_cast<double>(src - 1));
      const auto i0 = static_cast<std::size_t>(s);
      t[i] = {i0, std::min(i0 + 1, src - 1), s - static_cast<double>(i0)};
    }
    return t;
  };
  const auto tx = taps(w, new_width);
  const auto ty = taps(h, new_height);
  for (std::size_t y = 0; y < new_height; ++y) {
    for (std::size_t x = 0; x < new_width; ++x) {
      const double top = std::lerp(img.at(tx[x].i0, ty[y].i0), img.at(tx[x].i1, ty[y].i0), tx[x].frac);
      const double bottom =
          std::lerp(img.at(tx[x].i0, ty[y].i1), img.at(tx[x].i1, ty[y].i1), tx[x].frac);
      // std::lerp is exact at the endpoints and bounded, so constants stay
      // constant and the output never leaves the input range.
      out[y * new_width + x] = std::lerp(top, bottom, ty[y].frac);
    }
  }
  return GrayImage(new_width, new_height, std::move(out));
}

GrayImage crop(const GrayImage& img, std::size_t x, std::size_t y, std::size_t width,
               std::size_t height) {
  if (width == 0 || height == 0 || x + width > img.width() || y + height > img.height()) {
    throw Error(ErrorCode::kArgument, "crop rectangle outside the image");
  }
  std::vector<double> out(width * height);
  for (std::size_t r = 0; r < height; ++r) {
    const auto row = img.data().subspan((y + r) * img.width() + x, width);
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(r * width));
  }
  return GrayImage(width, height, std::move(out));
}

}  // namespace hogkit
