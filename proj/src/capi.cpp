#include "hogkit/hogkit.h"

#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "hogkit/detector.hpp"
#include "hogkit/error.hpp"
#include "hogkit/features.hpp"
#include "hogkit/glyph.hpp"
#include "hogkit/image.hpp"
#include "hogkit/overlay.hpp"
#include "hogkit/parallel.hpp"
#include "hogkit/training.hpp"

struct hk_rgb_image {
  hogkit::RgbImage img;
};
struct hk_gray_image {
  hogkit::GrayImage img;
};
struct hk_hog_grid {
  hogkit::HogGrid grid;
};
struct hk_template {
  hogkit::Template tmpl;
};
struct hk_trainer {
  std::size_t win_px;
  hogkit::HogParams params;
  std::vector<hogkit::GrayImage> pos;
  std::vector<hogkit::GrayImage> neg;
};
struct hk_detections {
  std::vector<hogkit::Detection> dets;
};

namespace {

thread_local std::string t_last_error;

hk_status fail(hk_status status, std::string msg) {
  t_last_error = std::move(msg);
  return status;
}

hk_status to_status(hogkit::ErrorCode code) {
  return static_cast<hk_status>(static_cast<int>(code));
}

// Runs fn, translating exceptions into a status and the thread's last error.
template <typename Fn>
hk_status guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return HK_OK;
  } catch (const hogkit::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HK_ERR_INTERNAL, "unknown error");
  }
}

#define HK_REQUIRE(cond)                                                   \
  do {                                                                     \
    if (!(cond)) return fail(HK_ERR_ARGUMENT, "null or invalid argument: " #cond); \
  } while (0)

hogkit::HogParams from_c(const hk_hog_params* p) {
  hogkit::HogParams out;
  if (p == nullptr) return out;
  out.cell_size = p->cell_size;
  out.bins = p->bins;
  out.tau = p->tau;
  if (p->fixed_threshold >= 0.0) out.fixed_threshold = p->fixed_threshold;
  out.normalize = p->normalize != 0;
  out.epsilon = p->epsilon;
  return out;
}

}  // namespace

extern "C" {

const char* hk_last_error(void) { return t_last_error.c_str(); }

const char* hk_status_name(hk_status status) {
  switch (status) {
    case HK_OK: return "ok";
    case HK_ERR_ARGUMENT: return "argument error";
    case HK_ERR_IO: return "I/O error";
    case HK_ERR_DECODE: return "decode error";
    case HK_ERR_SIZE: return "size error";
    case HK_ERR_EMPTY_GRID: return "empty grid";
    case HK_ERR_ANNOTATION: return "annotation error";
    case HK_ERR_DEGENERATE: return "degenerate template";
    case HK_ERR_FORMAT: return "format error";
    case HK_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void hk_set_threads(size_t n) { hogkit::set_thread_count(n); }
size_t hk_get_threads(void) { return hogkit::thread_count(); }

// images

hk_status hk_image_load(const char* path, hk_rgb_image** out) {
  HK_REQUIRE(path && out);
  return guarded([&] { *out = new hk_rgb_image{hogkit::load_image(path)}; });
}

hk_status hk_rgb_create(size_t width, size_t height, const uint8_t* rgb, hk_rgb_image** out) {
  HK_REQUIRE(rgb && out);
  return guarded([&] {
    std::vector<std::uint8_t> data(rgb, rgb + 3 * width * height);
    *out = new hk_rgb_image{hogkit::RgbImage(width, height, std::move(data))};
  });
}

hk_status hk_rgb_save(const hk_rgb_image* img, const char* path) {
  HK_REQUIRE(img && path);
  return guarded([&] { hogkit::save_image(img->img, path); });
}

size_t hk_rgb_width(const hk_rgb_image* img) { return img ? img->img.width() : 0; }
size_t hk_rgb_height(const hk_rgb_image* img) { return img ? img->img.height() : 0; }
const uint8_t* hk_rgb_data(const hk_rgb_image* img) {
  return img ? img->img.data().data() : nullptr;
}
void hk_rgb_free(hk_rgb_image* img) { delete img; }

hk_status hk_rgb_to_gray(const hk_rgb_image* img, hk_gray_image** out) {
  HK_REQUIRE(img && out);
  return guarded([&] { *out = new hk_gray_image{hogkit::to_gray(img->img)}; });
}

hk_status hk_gray_create(size_t width, size_t height, const double* samples,
                         hk_gray_image** out) {
  HK_REQUIRE(samples && out);
  return guarded([&] {
    std::vector<double> data(samples, samples + width * height);
    *out = new hk_gray_image{hogkit::GrayImage(width, height, std::move(data))};
  });
}

hk_status hk_gray_resize(const hk_gray_image* img, size_t width, size_t height,
                         hk_gray_image** out) {
  HK_REQUIRE(img && out);
  return guarded(
      [&] { *out = new hk_gray_image{hogkit::resize_bilinear(img->img, width, height)}; });
}

hk_status hk_gray_save(const hk_gray_image* img, const char* path) {
  HK_REQUIRE(img && path);
  return guarded([&] { hogkit::save_image(img->img, path); });
}

size_t hk_gray_width(const hk_gray_image* img) { return img ? img->img.width() : 0; }
size_t hk_gray_height(const hk_gray_image* img) { return img ? img->img.height() : 0; }
const double* hk_gray_data(const hk_gray_image* img) {
  return img ? img->img.data().data() : nullptr;
}
void hk_gray_free(hk_gray_image* img) { delete img; }

// features

hk_hog_params hk_hog_params_default(void) {
  const hogkit::HogParams d;
  return hk_hog_params{static_cast<uint32_t>(d.cell_size), static_cast<uint32_t>(d.bins), d.tau,
                       -1.0, d.normalize ? 1 : 0, d.epsilon};
}

hk_status hk_hog_compute(const hk_gray_image* img, const hk_hog_params* params,
                         hk_hog_grid** out) {
  HK_REQUIRE(img && out);
  return guarded([&] { *out = new hk_hog_grid{hogkit::compute_hog(img->img, from_c(params))}; });
}

hk_status hk_hog_load(const char* path, hk_hog_grid** out) {
  HK_REQUIRE(path && out);
  return guarded([&] { *out = new hk_hog_grid{hogkit::load_hog(path)}; });
}

hk_status hk_hog_save(const hk_hog_grid* grid, const char* path) {
  HK_REQUIRE(grid && path);
  return guarded([&] { hogkit::save_hog(grid->grid, path); });
}

size_t hk_hog_cells_x(const hk_hog_grid* g) { return g ? g->grid.cells_x : 0; }
size_t hk_hog_cells_y(const hk_hog_grid* g) { return g ? g->grid.cells_y : 0; }
size_t hk_hog_bins(const hk_hog_grid* g) { return g ? g->grid.bins : 0; }
size_t hk_hog_cell_size(const hk_hog_grid* g) { return g ? g->grid.cell_size : 0; }
double hk_hog_threshold(const hk_hog_grid* g) { return g ? g->grid.threshold_used : 0.0; }
const double* hk_hog_data(const hk_hog_grid* g) { return g ? g->grid.hist.data() : nullptr; }
void hk_hog_free(hk_hog_grid* grid) { delete grid; }

hk_status hk_glyph_render(const hk_hog_grid* grid, size_t glyph_size, double gamma,
                          hk_gray_image** out) {
  HK_REQUIRE(grid && out);
  return guarded([&] {
    *out = new hk_gray_image{hogkit::render_glyphs(grid->grid, {glyph_size, gamma})};
  });
}

// training

hk_status hk_trainer_create(size_t win_px, const hk_hog_params* params, hk_trainer** out) {
  HK_REQUIRE(out);
  return guarded([&] {
    const hogkit::HogParams p = from_c(params);
    if (win_px == 0 || p.cell_size == 0 || win_px % p.cell_size != 0) {
      throw hogkit::Error(hogkit::ErrorCode::kArgument,
                          "training window must be a positive multiple of the cell size");
    }
    *out = new hk_trainer{win_px, p, {}, {}};
  });
}

hk_status hk_trainer_add(hk_trainer* trainer, const hk_gray_image* img, const hk_annotation* ann,
                         size_t index) {
  HK_REQUIRE(trainer && img && ann);
  return guarded([&] {
    hogkit::Annotation a;
    a.kind = ann->kind == HK_ANN_POINT ? hogkit::AnnotationKind::kPoint
                                       : hogkit::AnnotationKind::kRect;
    a.polarity = ann->polarity == HK_NEGATIVE ? hogkit::Polarity::kNegative
                                              : hogkit::Polarity::kPositive;
    a.x = static_cast<long>(ann->x);
    a.y = static_cast<long>(ann->y);
    a.w = static_cast<long>(ann->w);
    a.h = static_cast<long>(ann->h);
    auto patch = hogkit::extract_patch(img->img, a, trainer->win_px, index);
    (a.polarity == hogkit::Polarity::kPositive ? trainer->pos : trainer->neg)
        .push_back(std::move(patch));
  });
}

size_t hk_trainer_positives(const hk_trainer* t) { return t ? t->pos.size() : 0; }
size_t hk_trainer_negatives(const hk_trainer* t) { return t ? t->neg.size() : 0; }

hk_status hk_trainer_build(const hk_trainer* trainer, hk_template** out) {
  HK_REQUIRE(trainer && out);
  return guarded([&] {
    *out = new hk_template{hogkit::build_template(trainer->pos, trainer->neg, trainer->params)};
  });
}

void hk_trainer_free(hk_trainer* trainer) { delete trainer; }

hk_status hk_template_create(size_t tcells_x, size_t tcells_y, size_t bins, const double* weights,
                             hk_template** out) {
  HK_REQUIRE(weights && out);
  return guarded([&] {
    std::vector<double> w(weights, weights + tcells_x * tcells_y * bins);
    *out = new hk_template{hogkit::make_template(tcells_x, tcells_y, bins, std::move(w))};
  });
}

hk_status hk_template_load(const char* path, hk_template** out) {
  HK_REQUIRE(path && out);
  return guarded([&] { *out = new hk_template{hogkit::load_template(path)}; });
}

hk_status hk_template_save(const hk_template* tmpl, const char* path) {
  HK_REQUIRE(tmpl && path);
  return guarded([&] { hogkit::save_template(tmpl->tmpl, path); });
}

size_t hk_template_cells_x(const hk_template* t) { return t ? t->tmpl.tcells_x : 0; }
size_t hk_template_cells_y(const hk_template* t) { return t ? t->tmpl.tcells_y : 0; }
size_t hk_template_bins(const hk_template* t) { return t ? t->tmpl.bins : 0; }
double hk_template_norm(const hk_template* t) { return t ? t->tmpl.norm : 0.0; }
const double* hk_template_weights(const hk_template* t) {
  return t ? t->tmpl.weights.data() : nullptr;
}
void hk_template_free(hk_template* tmpl) { delete tmpl; }

// detection

hk_detect_params hk_detect_params_default(void) {
  const hogkit::NmsConfig nms;
  const hogkit::PyramidConfig pyr;
  return hk_detect_params{5, nms.min_dist, 0, pyr.scale, pyr.max_levels, hk_hog_params_default()};
}

hk_status hk_detect(const hk_gray_image* img, const hk_template* tmpl,
                    const hk_detect_params* params, hk_detections** out) {
  HK_REQUIRE(img && tmpl && out);
  return guarded([&] {
    const hk_detect_params p = params ? *params : hk_detect_params_default();
    const hogkit::HogParams hog = from_c(&p.hog);
    const hogkit::NmsConfig nms{p.min_dist};
    std::vector<hogkit::Detection> dets;
    if (p.multiscale) {
      dets = hogkit::detect_multiscale(img->img, tmpl->tmpl, p.top_n, nms,
                                       {p.scale, p.max_levels}, hog);
    } else {
      dets = hogkit::detect(img->img, tmpl->tmpl, p.top_n, nms, hog);
    }
    *out = new hk_detections{std::move(dets)};
  });
}

size_t hk_detections_count(const hk_detections* dets) { return dets ? dets->dets.size() : 0; }

hk_status hk_detections_get(const hk_detections* dets, size_t i, hk_detection* out) {
  HK_REQUIRE(dets && out);
  if (i >= dets->dets.size()) {
    return fail(HK_ERR_ARGUMENT, "detection index " + std::to_string(i) + " out of range");
  }
  const hogkit::Detection& d = dets->dets[i];
  *out = hk_detection{d.box.x, d.box.y, d.box.w, d.box.h, d.score, d.level, d.rank};
  return HK_OK;
}

void hk_detections_free(hk_detections* dets) { delete dets; }

hk_status hk_render_overlay(const hk_rgb_image* img, const hk_detections* dets,
                            hk_rgb_image** out) {
  HK_REQUIRE(img && dets && out);
  return guarded([&] { *out = new hk_rgb_image{hogkit::draw_detections(img->img, dets->dets)}; });
}

}  // extern "C"
