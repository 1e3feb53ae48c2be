/*
 * hogkit C API.
 *
 * Objects are opaque handles created by hk_*_create/load/compute calls and
 * released with the matching hk_*_free. Every fallible call returns an
 * hk_status; on failure the out-parameter is left untouched and
 * hk_last_error() returns a message for the calling thread.
 *
 * Handles are immutable after creation and may be shared across threads.
 */
#ifndef HOGKIT_HOGKIT_H
#define HOGKIT_HOGKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HOGKIT_BUILDING)
#    define HK_API __declspec(dllexport)
#  else
#    define HK_API __declspec(dllimport)
#  endif
#else
#  define HK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hk_status {
  HK_OK = 0,
  HK_ERR_ARGUMENT = 1,
  HK_ERR_IO = 2,
  HK_ERR_DECODE = 3,
  HK_ERR_SIZE = 4,
  HK_ERR_EMPTY_GRID = 5,
  HK_ERR_ANNOTATION = 6,
  HK_ERR_DEGENERATE = 7,
  HK_ERR_FORMAT = 8,
  HK_ERR_INTERNAL = 99
} hk_status;

typedef struct hk_rgb_image hk_rgb_image;
typedef struct hk_gray_image hk_gray_image;
typedef struct hk_hog_grid hk_hog_grid;
typedef struct hk_template hk_template;
typedef struct hk_trainer hk_trainer;
typedef struct hk_detections hk_detections;

/* Message for the most recent failure on this thread ("" if none). */
HK_API const char* hk_last_error(void);
HK_API const char* hk_status_name(hk_status status);

/* 0 restores HOGKIT_THREADS / hardware resolution. */
HK_API void hk_set_threads(size_t n);
HK_API size_t hk_get_threads(void);

/* ---- images ---------------------------------------------------------- */

HK_API hk_status hk_image_load(const char* path, hk_rgb_image** out);
HK_API hk_status hk_rgb_create(size_t width, size_t height, const uint8_t* rgb,
                               hk_rgb_image** out);
HK_API hk_status hk_rgb_save(const hk_rgb_image* img, const char* path);
HK_API size_t hk_rgb_width(const hk_rgb_image* img);
HK_API size_t hk_rgb_height(const hk_rgb_image* img);
/* 3*width*height interleaved bytes, valid while img lives. */
HK_API const uint8_t* hk_rgb_data(const hk_rgb_image* img);
HK_API void hk_rgb_free(hk_rgb_image* img);

HK_API hk_status hk_rgb_to_gray(const hk_rgb_image* img, hk_gray_image** out);
/* Samples must lie in [0,1]. */
HK_API hk_status hk_gray_create(size_t width, size_t height, const double* samples,
                                hk_gray_image** out);
HK_API hk_status hk_gray_resize(const hk_gray_image* img, size_t width, size_t height,
                                hk_gray_image** out);
HK_API hk_status hk_gray_save(const hk_gray_image* img, const char* path);
HK_API size_t hk_gray_width(const hk_gray_image* img);
HK_API size_t hk_gray_height(const hk_gray_image* img);
HK_API const double* hk_gray_data(const hk_gray_image* img);
HK_API void hk_gray_free(hk_gray_image* img);

/* ---- features -------------------------------------------------------- */

typedef struct hk_hog_params {
  uint32_t cell_size; /* pixels, default 8 */
  uint32_t bins;      /* default 9 */
  double tau;         /* fraction of the max magnitude, default 0.10 */
  double fixed_threshold; /* used instead of tau*max when >= 0; default -1 */
  int normalize;      /* per-cell L2 normalization, default 0 */
  double epsilon;     /* default 1e-6 */
} hk_hog_params;

HK_API hk_hog_params hk_hog_params_default(void);

/* params may be NULL for defaults. */
HK_API hk_status hk_hog_compute(const hk_gray_image* img, const hk_hog_params* params,
                                hk_hog_grid** out);
HK_API hk_status hk_hog_load(const char* path, hk_hog_grid** out);
HK_API hk_status hk_hog_save(const hk_hog_grid* grid, const char* path);
HK_API size_t hk_hog_cells_x(const hk_hog_grid* grid);
HK_API size_t hk_hog_cells_y(const hk_hog_grid* grid);
HK_API size_t hk_hog_bins(const hk_hog_grid* grid);
HK_API size_t hk_hog_cell_size(const hk_hog_grid* grid);
HK_API double hk_hog_threshold(const hk_hog_grid* grid);
/* cells_x*cells_y*bins values, cell-major, bin-minor. */
HK_API const double* hk_hog_data(const hk_hog_grid* grid);
HK_API void hk_hog_free(hk_hog_grid* grid);

/* glyph_size odd and >= 3 (15 is customary), gamma > 0. */
HK_API hk_status hk_glyph_render(const hk_hog_grid* grid, size_t glyph_size, double gamma,
                                 hk_gray_image** out);

/* ---- training -------------------------------------------------------- */

typedef enum hk_annotation_kind { HK_ANN_POINT = 0, HK_ANN_RECT = 1 } hk_annotation_kind;
typedef enum hk_polarity { HK_POSITIVE = 0, HK_NEGATIVE = 1 } hk_polarity;

typedef struct hk_annotation {
  hk_annotation_kind kind;
  hk_polarity polarity;
  int64_t x, y; /* point: window center; rect: top-left */
  int64_t w, h; /* rect only */
} hk_annotation;

/* win_px: training window side in pixels (multiple of the cell size). */
HK_API hk_status hk_trainer_create(size_t win_px, const hk_hog_params* params,
                                   hk_trainer** out);
/* Extracts the annotated patch from img. index is used in error messages. */
HK_API hk_status hk_trainer_add(hk_trainer* trainer, const hk_gray_image* img,
                                const hk_annotation* ann, size_t index);
HK_API size_t hk_trainer_positives(const hk_trainer* trainer);
HK_API size_t hk_trainer_negatives(const hk_trainer* trainer);
HK_API hk_status hk_trainer_build(const hk_trainer* trainer, hk_template** out);
HK_API void hk_trainer_free(hk_trainer* trainer);

HK_API hk_status hk_template_create(size_t tcells_x, size_t tcells_y, size_t bins,
                                    const double* weights, hk_template** out);
HK_API hk_status hk_template_load(const char* path, hk_template** out);
HK_API hk_status hk_template_save(const hk_template* tmpl, const char* path);
HK_API size_t hk_template_cells_x(const hk_template* tmpl);
HK_API size_t hk_template_cells_y(const hk_template* tmpl);
HK_API size_t hk_template_bins(const hk_template* tmpl);
HK_API double hk_template_norm(const hk_template* tmpl);
HK_API const double* hk_template_weights(const hk_template* tmpl);
HK_API void hk_template_free(hk_template* tmpl);

/* ---- detection ------------------------------------------------------- */

typedef struct hk_detect_params {
  size_t top_n;       /* default 5 */
  double min_dist;    /* Chebyshev center distance in pixels, default 128 */
  int multiscale;     /* default 0 */
  double scale;       /* pyramid factor in (0,1), default 0.5 */
  size_t max_levels;  /* default 32 */
  hk_hog_params hog;
} hk_detect_params;

typedef struct hk_detection {
  int64_t x, y, w, h; /* base-image pixels */
  double score;
  size_t level;
  size_t rank;
} hk_detection;

HK_API hk_detect_params hk_detect_params_default(void);

/* params may be NULL for defaults. */
HK_API hk_status hk_detect(const hk_gray_image* img, const hk_template* tmpl,
                           const hk_detect_params* params, hk_detections** out);
HK_API size_t hk_detections_count(const hk_detections* dets);
HK_API hk_status hk_detections_get(const hk_detections* dets, size_t i, hk_detection* out);
HK_API void hk_detections_free(hk_detections* dets);

/* Copy of img with ranked green-to-red 2-pixel box outlines. */
HK_API hk_status hk_render_overlay(const hk_rgb_image* img, const hk_detections* dets,
                                   hk_rgb_image** out);

#ifdef __cplusplus
}
#endif

#endif /* HOGKIT_HOGKIT_H */
