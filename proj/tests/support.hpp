#pragma once

// Test-only helpers: seeded image generators, synthetic fixtures and
// brute-force oracles. The oracles deliberately avoid the library's code
// paths (no compute_gradient, no orientation_bin, no score_map).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hogkit/detector.hpp"
#include "hogkit/features.hpp"
#include "hogkit/image.hpp"
#include "hogkit/training.hpp"

namespace hogkit::test {

inline GrayImage random_image(std::size_t w, std::size_t h, std::uint64_t seed, double lo = 0.0,
                              double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> px(w * h);
  for (double& v : px) v = dist(rng);
  return GrayImage(w, h, std::move(px));
}

inline GrayImage scaled(const GrayImage& img, double a) {
  std::vector<double> px(img.data().begin(), img.data().end());
  for (double& v : px) v *= a;
  return GrayImage(img.width(), img.height(), std::move(px));
}

// Oracle orientation bin: linear scan for the last edge not above theta.
inline std::size_t oracle_bin(double theta, std::size_t bins) {
  std::size_t k = 0;
  for (std::size_t j = 0; j < bins; ++j) {
    const double edge =
        -std::numbers::pi + static_cast<double>(j) * (2.0 * std::numbers::pi / bins);
    if (theta >= edge) k = j;
  }
  return k;
}

// Per-pixel brute-force HOG: recomputes the stencil at every pixel.
inline std::vector<double> oracle_hog(const GrayImage& img, std::size_t cs = 8,
                                      std::size_t bins = 9, double tau = 0.10) {
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  auto grad = [&](std::size_t x, std::size_t y, double& gx, double& gy) {
    gx = gy = 0.0;
    if (x == 0 || y == 0 || x + 1 >= w || y + 1 >= h) return;
    gx = img.at(x + 1, y) - img.at(x - 1, y);
    gy = img.at(x, y + 1) - img.at(x, y - 1);
  };
  double max_mag = 0.0;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double gx, gy;
      grad(x, y, gx, gy);
      max_mag = std::max(max_mag, std::sqrt(gx * gx + gy * gy));
    }
  }
  const double thr = tau * max_mag;
  const std::size_t cx_n = w / cs;
  const std::size_t cy_n = h / cs;
  std::vector<double> hist(cx_n * cy_n * bins, 0.0);
  for (std::size_t y = 0; y < cy_n * cs; ++y) {
    for (std::size_t x = 0; x < cx_n * cs; ++x) {
      double gx, gy;
      grad(x, y, gx, gy);
      const double mag = std::sqrt(gx * gx + gy * gy);
      if (!(mag > thr)) continue;
      double theta = std::atan2(gy, gx);
      if (theta == -std::numbers::pi) theta = std::numbers::pi;
      hist[((y / cs) * cx_n + (x / cs)) * bins + oracle_bin(theta, bins)] += 1.0;
    }
  }
  return hist;
}

// Naive cosine score of the template at placement (px, py).
inline double oracle_score(const HogGrid& g, const Template& t, std::size_t px, std::size_t py) {
  double dot = 0.0, ww = 0.0, tt = 0.0;
  for (std::size_t cy = 0; cy < t.tcells_y; ++cy) {
    for (std::size_t cx = 0; cx < t.tcells_x; ++cx) {
      for (std::size_t k = 0; k < t.bins; ++k) {
        const double wv = g.at(px + cx, py + cy, k);
        const double tv = t.weights[(cy * t.tcells_x + cx) * t.bins + k];
        dot += wv * tv;
        ww += wv * wv;
        tt += tv * tv;
      }
    }
  }
  if (ww == 0.0) return 0.0;
  return dot / (std::sqrt(ww) * std::sqrt(tt));
}

// Exhaustive greedy oracle: among all conflict-free subsets of size <= n, the
// greedy answer is the one whose membership bit-vector (earliest candidate
// most significant) is largest. Pool must already be sorted; size <= 20.
inline std::vector<std::size_t> oracle_greedy(const std::vector<Candidate>& sorted, std::size_t n,
                                              double min_dist) {
  const std::size_t m = sorted.size();
  std::vector<std::size_t> best;
  std::uint32_t best_key = 0;
  bool have = false;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) members.push_back(i);
    }
    if (members.size() > n) continue;
    bool ok = true;
    for (std::size_t a = 0; a < members.size() && ok; ++a) {
      for (std::size_t b = a + 1; b < members.size() && ok; ++b) {
        const Box& p = sorted[members[a]].box;
        const Box& q = sorted[members[b]].box;
        const double d = std::max(std::abs((p.x + p.w / 2.0) - (q.x + q.w / 2.0)),
                                  std::abs((p.y + p.h / 2.0) - (q.y + q.h / 2.0)));
        ok = d >= min_dist;
      }
    }
    if (!ok) continue;
    // Bit i of the key is candidate i, reversed so index 0 is most significant.
    std::uint32_t key = 0;
    for (std::size_t i : members) key |= 1u << (m - 1 - i);
    if (!have || key > best_key) {
      best_key = key;
      best = members;
      have = true;
    }
  }
  return best;
}

inline bool pairwise_separated(const std::vector<Detection>& dets, double min_dist) {
  for (std::size_t a = 0; a < dets.size(); ++a) {
    for (std::size_t b = a + 1; b < dets.size(); ++b) {
      if (center_distance(dets[a].box, dets[b].box) < min_dist) return false;
    }
  }
  return true;
}

// ---- synthetic fixtures --------------------------------------------------

// 64x64 "ring with a bar" target: strong edges around radius ~20 and an empty
// middle, so a 2x copy has nothing of interest near its center.
inline double target_pattern(double u, double v) {
  const double dx = u - 31.5, dy = v - 31.5;
  const double r = std::sqrt(dx * dx + dy * dy);
  double s = 0.15;
  if (r >= 16.0 && r <= 24.0) s = 0.95;
  if (std::abs(dy) <= 3.0 && dx >= 24.0 && dx <= 30.0) s = 0.95;
  if (std::abs(dx) <= 3.0 && dy <= -24.0 && dy >= -30.0) s = 0.95;
  return s;
}

// Distractor: the ring alone.
inline double distractor_pattern(double u, double v) {
  const double dx = u - 31.5, dy = v - 31.5;
  const double r = std::sqrt(dx * dx + dy * dy);
  return (r >= 16.0 && r <= 24.0) ? 0.95 : 0.15;
}

// Low-contrast noise background (stays below the 10% vote threshold next to
// the pattern edges).
inline GrayImage noise_background(std::size_t w, std::size_t h, std::uint64_t seed) {
  return random_image(w, h, seed, 0.14, 0.16);
}

template <typename Pattern>
void paint(GrayImage& img, Pattern pattern, std::size_t x0, std::size_t y0, std::size_t scale) {
  for (std::size_t y = 0; y < 64 * scale; ++y) {
    for (std::size_t x = 0; x < 64 * scale; ++x) {
      img.at(x0 + x, y0 + y) = pattern(static_cast<double>(x / scale), static_cast<double>(y / scale));
    }
  }
}

inline GrayImage pattern_patch(double (*pattern)(double, double)) {
  GrayImage img(64, 64, 0.0);
  paint(img, pattern, 0, 0, 1);
  return img;
}

// Unique scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() /
             ("hogkit_" + tag + "_" + std::to_string(rng() % 1000000000ull));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace hogkit::test
