#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hogkit/features.hpp"
#include "hogkit/image.hpp"
#include "hogkit/training.hpp"

namespace hogkit {

// Cosine score per template placement; placement (px, py) is the window whose
// top-left cell is (px, py).
struct ScoreGrid {
  std::size_t width = 0;   // cells_x - tcells_x + 1
  std::size_t height = 0;  // cells_y - tcells_y + 1
  std::size_t tcells_x = 0;
  std::size_t tcells_y = 0;
  std::vector<double> scores;

  double at(std::size_t px, std::size_t py) const { return scores[py * width + px]; }
};

struct Box {
  long x = 0;
  long y = 0;
  long w = 0;
  long h = 0;

  double center_x() const { return static_cast<double>(x) + static_cast<double>(w) / 2.0; }
  double center_y() const { return static_cast<double>(y) + static_cast<double>(h) / 2.0; }

  bool operator==(const Box&) const = default;
};

struct Detection {
  Box box;
  double score = 0.0;
  std::size_t level = 0;
  std::size_t rank = 0;

  bool operator==(const Detection&) const = default;
};

struct NmsConfig {
  // Chebyshev distance between box centers, base-image pixels.
  double min_dist = 128.0;
};

struct PyramidConfig {
  double scale = 0.5;
  std::size_t max_levels = 32;
};

// A scored box before suppression. cell_x/cell_y are the placement within its
// level and only serve tie-breaking.
struct Candidate {
  Box box;
  double score = 0.0;
  std::size_t level = 0;
  std::size_t cell_x = 0;
  std::size_t cell_y = 0;
};

// Chebyshev distance between box centers.
double center_distance(const Box& a, const Box& b);

// <window, template> / (|window| |template|), 0 where the window is all zero.
// Throws kSize when the grid is smaller than the template or bins differ.
ScoreGrid score_map(const HogGrid& grid, const Template& tmpl);

// Sorts by score descending, then level, y, x ascending.
void sort_candidates(std::vector<Candidate>& pool);

// Greedy suppression over an already sorted pool: a candidate is accepted when
// its center is at least min_dist from every accepted one. Ranks are assigned
// in acceptance order.
std::vector<Detection> select_greedy(std::span<const Candidate> sorted_pool, std::size_t n,
                                     const NmsConfig& cfg);

// Every placement of `scores` as a level-0 candidate with pixel boxes.
std::vector<Candidate> candidates_from_scores(const ScoreGrid& scores, std::size_t cell_size,
                                              std::size_t level = 0);

// Top-n single-scale detections. Throws kArgument when n == 0.
std::vector<Detection> nms_top_n(const ScoreGrid& scores, std::size_t n, const NmsConfig& cfg,
                                 std::size_t cell_size);

// Level k has dimensions round(base * scale^k) (min 1), produced by resizing
// the previous level; levels are kept while both sides cover the template.
// Throws kSize if the base is smaller than the template, kArgument on a bad
// config.
std::vector<GrayImage> build_pyramid(const GrayImage& img, const PyramidConfig& cfg,
                                     std::size_t tmpl_px_w, std::size_t tmpl_px_h);

// Single-scale detection on the base image.
std::vector<Detection> detect(const GrayImage& img, const Template& tmpl, std::size_t n,
                              const NmsConfig& nms, const HogParams& hog = {});

// Scores every pyramid level, maps boxes back to base coordinates (divide by
// scale^k, round, clamp) and runs the greedy selection over the pooled list.
std::vector<Detection> detect_multiscale(const GrayImage& img, const Template& tmpl,
                                         std::size_t n, const NmsConfig& nms,
                                         const PyramidConfig& pyr, const HogParams& hog = {});

}  // namespace hogkit
