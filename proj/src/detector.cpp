#include "hogkit/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hogkit/error.hpp"
#include "hogkit/parallel.hpp"

namespace hogkit {

double center_distance(const Box& a, const Box& b) {
  return std::max(std::abs(a.center_x() - b.center_x()), std::abs(a.center_y() - b.center_y()));
}

ScoreGrid score_map(const HogGrid& grid, const Template& tmpl) {
  if (grid.bins != tmpl.bins) {
    throw Error(ErrorCode::kSize, "template has " + std::to_string(tmpl.bins) +
                                      " bins, grid has " + std::to_string(grid.bins));
  }
  if (grid.cells_x < tmpl.tcells_x || grid.cells_y < tmpl.tcells_y) {
    throw Error(ErrorCode::kSize, "grid " + std::to_string(grid.cells_x) + "x" +
                                      std::to_string(grid.cells_y) +
                                      " cells is smaller than template " +
                                      std::to_string(tmpl.tcells_x) + "x" +
                                      std::to_string(tmpl.tcells_y));
  }
  if (!(tmpl.norm > 0.0)) throw Error(ErrorCode::kDegenerate, "template has zero norm");

  ScoreGrid out;
  out.width = grid.cells_x - tmpl.tcells_x + 1;
  out.height = grid.cells_y - tmpl.tcells_y + 1;
  out.tcells_x = tmpl.tcells_x;
  out.tcells_y = tmpl.tcells_y;
  out.scores.assign(out.width * out.height, 0.0);

  const std::size_t bins = grid.bins;
  const std::size_t row_len = tmpl.tcells_x * bins;
  parallel_for(0, out.height, [&](std::size_t py) {
    for (std::size_t px = 0; px < out.width; ++px) {
      double dot = 0.0;
      double sq = 0.0;
      for (std::size_t r = 0; r < tmpl.tcells_y; ++r) {
        const double* w = &grid.hist[((py + r) * grid.cells_x + px) * bins];
        const double* t = &tmpl.weights[r * row_len];
        for (std::size_t i = 0; i < row_len; ++i) {
          dot += w[i] * t[i];
          sq += w[i] * w[i];
        }
      }
      if (sq > 0.0) {
        out.scores[py * out.width + px] =
            std::clamp(dot / (std::sqrt(sq) * tmpl.norm), -1.0, 1.0);
      }
    }
  });
  return out;
}

void sort_candidates(std::vector<Candidate>& pool) {
  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.level != b.level) return a.level < b.level;
    if (a.cell_y != b.cell_y) return a.cell_y < b.cell_y;
    return a.cell_x < b.cell_x;
  });
}

std::vector<Detection> select_greedy(std::span<const Candidate> sorted_pool, std::size_t n,
                                     const NmsConfig& cfg) {
  std::vector<Detection> accepted;
  for (const Candidate& c : sorted_pool) {
    if (accepted.size() >= n) break;
    const bool clear = std::all_of(accepted.begin(), accepted.end(), [&](const Detection& d) {
      return center_distance(d.box, c.box) >= cfg.min_dist;
    });
    if (clear) accepted.push_back({c.box, c.score, c.level, accepted.size()});
  }
  return accepted;
}

std::vector<Candidate> candidates_from_scores(const ScoreGrid& scores, std::size_t cell_size,
                                              std::size_t level) {
  const long cs = static_cast<long>(cell_size);
  std::vector<Candidate> pool;
  pool.reserve(scores.scores.size());
  for (std::size_t py = 0; py < scores.height; ++py) {
    for (std::size_t px = 0; px < scores.width; ++px) {
      const Box box{static_cast<long>(px) * cs, static_cast<long>(py) * cs,
                    static_cast<long>(scores.tcells_x) * cs,
                    static_cast<long>(scores.tcells_y) * cs};
      pool.push_back({box, scores.at(px, py), level, px, py});
    }
  }
  return pool;
}

std::vector<Detection> nms_top_n(const ScoreGrid& scores, std::size_t n, const NmsConfig& cfg,
                                 std::size_t cell_size) {
  if (n == 0) throw Error(ErrorCode::kArgument, "top-n must be >= 1");
  if (!(cfg.min_dist >= 0.0)) throw Error(ErrorCode::kArgument, "min_dist must be >= 0");
  auto pool = candidates_from_scores(scores, cell_size);
  sort_candidates(pool);
  return select_greedy(pool, n, cfg);
}

std::vector<GrayImage> build_pyramid(const GrayImage& img, const PyramidConfig& cfg,
                                     std::size_t tmpl_px_w, std::size_t tmpl_px_h) {
  if (!(cfg.scale > 0.0 && cfg.scale < 1.0)) {
    throw Error(ErrorCode::kArgument, "pyramid scale must be in (0,1)");
  }
  if (cfg.max_levels == 0) throw Error(ErrorCode::kArgument, "max_levels must be >= 1");
  if (img.width() < tmpl_px_w || img.height() < tmpl_px_h) {
    throw Error(ErrorCode::kSize, "image " + std::to_string(img.width()) + "x" +
                                      std::to_string(img.height()) +
                                      " is smaller than the template window " +
                                      std::to_string(tmpl_px_w) + "x" + std::to_string(tmpl_px_h));
  }
  std::vector<GrayImage> levels;
  levels.push_back(img);
  for (std::size_t k = 1; k < cfg.max_levels; ++k) {
    const double f = std::pow(cfg.scale, static_cast<double>(k));
    const auto w = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(img.width() * f)));
    const auto h = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(img.height() * f)));
    if (w < tmpl_px_w || h < tmpl_px_h) break;
    levels.push_back(resize_bilinear(levels.back(), w, h));
  }
  return levels;
}

std::vector<Detection> detect(const GrayImage& img, const Template& tmpl, std::size_t n,
                              const NmsConfig& nms, const HogParams& hog) {
  return nms_top_n(score_map(compute_hog(img, hog), tmpl), n, nms, hog.cell_size);
}

std::vector<Detection> detect_multiscale(const GrayImage& img, const Template& tmpl,
                                         std::size_t n, const NmsConfig& nms,
                                         const PyramidConfig& pyr, const HogParams& hog) {
  if (n == 0) throw Error(ErrorCode::kArgument, "top-n must be >= 1");
  if (!(nms.min_dist >= 0.0)) throw Error(ErrorCode::kArgument, "min_dist must be >= 0");
  const auto levels =
      build_pyramid(img, pyr, tmpl.tcells_x * hog.cell_size, tmpl.tcells_y * hog.cell_size);

  const long base_w = static_cast<long>(img.width());
  const long base_h = static_cast<long>(img.height());
  std::vector<std::vector<Candidate>> per_level(levels.size());
  // Level 0 dominates the cost, so levels run in order and the parallelism
  // lives inside compute_hog and score_map.
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const ScoreGrid scores = score_map(compute_hog(levels[k], hog), tmpl);
    auto pool = candidates_from_scores(scores, hog.cell_size, k);
    const double f = std::pow(pyr.scale, static_cast<double>(k));
    for (Candidate& c : pool) {
      Box& b = c.box;
      b.x = std::clamp(std::lround(b.x / f), 0L, base_w - 1);
      b.y = std::clamp(std::lround(b.y / f), 0L, base_h - 1);
      b.w = std::min(std::lround(b.w / f), base_w - b.x);
      b.h = std::min(std::lround(b.h / f), base_h - b.y);
    }
    per_level[k] = std::move(pool);
  }

  std::vector<Candidate> pool;
  for (auto& lv : per_level) pool.insert(pool.end(), lv.begin(), lv.end());
  sort_candidates(pool);
  return select_greedy(pool, n, nms);
}

}  // namespace hogkit
