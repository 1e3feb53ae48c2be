#include "hogkit/training.hpp"

#include <cmath>
#include <string>

#include "binio.hpp"
#include "hogkit/error.hpp"
#include "hogkit/parallel.hpp"

namespace hogkit {

namespace {

[[noreturn]] void out_of_bounds(std::size_t index, long x, long y, long w, long h,
                                const GrayImage& img) {
  throw Error(ErrorCode::kAnnotation,
              "annotation " + std::to_string(index) + ": window (" + std::to_string(x) + "," +
                  std::to_string(y) + ") " + std::to_string(w) + "x" + std::to_string(h) +
                  " is outside the " + std::to_string(img.width()) + "x" +
                  std::to_string(img.height()) + " image");
}

double l2_norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

// Mean of per-patch histograms, accumulated in list order.
HogGrid mean_hog(std::span<const GrayImage> patches, const HogParams& params) {
  std::vector<HogGrid> grids(patches.size());
  parallel_for(0, patches.size(), [&](std::size_t i) { grids[i] = compute_hog(patches[i], params); });
  HogGrid mean = grids.front();
  for (std::size_t g = 1; g < grids.size(); ++g) {
    for (std::size_t i = 0; i < mean.hist.size(); ++i) mean.hist[i] += grids[g].hist[i];
  }
  for (double& v : mean.hist) v /= static_cast<double>(grids.size());
  return mean;
}

}  // namespace

GrayImage extract_patch(const GrayImage& img, const Annotation& ann, std::size_t win_px,
                        std::size_t index) {
  if (win_px == 0) throw Error(ErrorCode::kArgument, "window size must be >= 1");
  const long win = static_cast<long>(win_px);
  const long img_w = static_cast<long>(img.width());
  const long img_h = static_cast<long>(img.height());

  if (ann.kind == AnnotationKind::kPoint) {
    const long x0 = ann.x - win / 2;
    const long y0 = ann.y - win / 2;
    if (x0 < 0 || y0 < 0 || x0 + win > img_w || y0 + win > img_h) {
      out_of_bounds(index, x0, y0, win, win, img);
    }
    return crop(img, static_cast<std::size_t>(x0), static_cast<std::size_t>(y0), win_px, win_px);
  }

  if (ann.w < kMinRectSide || ann.h < kMinRectSide) {
    throw Error(ErrorCode::kArgument, "annotation " + std::to_string(index) + ": rect " +
                                          std::to_string(ann.w) + "x" + std::to_string(ann.h) +
                                          " is smaller than 8x8");
  }
  if (ann.x < 0 || ann.y < 0 || ann.x + ann.w > img_w || ann.y + ann.h > img_h) {
    out_of_bounds(index, ann.x, ann.y, ann.w, ann.h, img);
  }
  GrayImage patch = crop(img, static_cast<std::size_t>(ann.x), static_cast<std::size_t>(ann.y),
                         static_cast<std::size_t>(ann.w), static_cast<std::size_t>(ann.h));
  if (patch.width() == win_px && patch.height() == win_px) return patch;
  return resize_bilinear(patch, win_px, win_px);
}

Template make_template(std::size_t tcells_x, std::size_t tcells_y, std::size_t bins,
                       std::vector<double> weights) {
  if (tcells_x == 0 || tcells_y == 0 || bins == 0) {
    throw Error(ErrorCode::kArgument, "template dimensions must be nonzero");
  }
  if (weights.size() != tcells_x * tcells_y * bins) {
    throw Error(ErrorCode::kArgument, "template weights length does not match its shape");
  }
  Template t{tcells_x, tcells_y, bins, std::move(weights), 0.0};
  t.norm = l2_norm(t.weights);
  if (!(t.norm > 0.0) || !std::isfinite(t.norm)) {
    throw Error(ErrorCode::kDegenerate, "template has zero (or non-finite) norm");
  }
  return t;
}

Template build_template(std::span<const GrayImage> pos, std::span<const GrayImage> neg,
                        const HogParams& params) {
  if (pos.empty()) throw Error(ErrorCode::kArgument, "at least one positive patch is required");
  const std::size_t w = pos.front().width();
  const std::size_t h = pos.front().height();
  auto same_size = [&](const GrayImage& p) { return p.width() == w && p.height() == h; };
  for (const auto& p : pos) {
    if (!same_size(p)) throw Error(ErrorCode::kArgument, "training patches differ in size");
  }
  for (const auto& p : neg) {
    if (!same_size(p)) throw Error(ErrorCode::kArgument, "training patches differ in size");
  }

  HogGrid mean = mean_hog(pos, params);
  if (!neg.empty()) {
    const HogGrid neg_mean = mean_hog(neg, params);
    for (std::size_t i = 0; i < mean.hist.size(); ++i) mean.hist[i] -= neg_mean.hist[i];
  }
  try {
    return make_template(mean.cells_x, mean.cells_y, mean.bins, std::move(mean.hist));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDegenerate) {
      throw Error(ErrorCode::kDegenerate,
                  "trained template is all zero (no gradient above threshold, or negatives "
                  "cancel the positives)");
    }
    throw;
  }
}

std::vector<std::uint8_t> serialize_template(const Template& t) {
  binio::Writer w;
  w.magic("HTPL");
  w.u32(static_cast<std::uint32_t>(t.tcells_x));
  w.u32(static_cast<std::uint32_t>(t.tcells_y));
  w.u32(static_cast<std::uint32_t>(t.bins));
  for (double v : t.weights) w.f64(v);
  return w.take();
}

Template deserialize_template(std::span<const std::uint8_t> bytes) {
  binio::Reader r(bytes, "template file");
  r.expect_magic("HTPL");
  const std::size_t tx = r.u32();
  const std::size_t ty = r.u32();
  const std::size_t bins = r.u32();
  const std::size_t count = tx * ty * bins;
  if (count == 0) throw Error(ErrorCode::kFormat, "template file: zero dimension");
  if (r.remaining() != count * 8) {
    throw Error(ErrorCode::kFormat, "template file: payload is " + std::to_string(r.remaining()) +
                                        " bytes, header implies " + std::to_string(count * 8));
  }
  std::vector<double> weights(count);
  for (double& v : weights) v = r.f64();
  r.expect_end();
  return make_template(tx, ty, bins, std::move(weights));
}

void save_template(const Template& t, const std::filesystem::path& path) {
  binio::write_file(path, serialize_template(t));
}

Template load_template(const std::filesystem::path& path) {
  return deserialize_template(binio::read_file(path));
}

}  // namespace hogkit
