// hogkit command-line front end. Talks to the library only through the C API.
//
//   hogkit hog     --input img --out grid.hog [--draw glyphs.pgm]
//   hogkit train   --annotations a.json [--annotations b.json ...] --out t.tpl
//   hogkit detect  --input img --template t.tpl [--multiscale] [--overlay o.ppm]
//   hogkit bench   --size 1024x1024 --iters 10

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "hogkit/hogkit.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using RgbPtr = std::unique_ptr<hk_rgb_image, Deleter<hk_rgb_image, hk_rgb_free>>;
using GrayPtr = std::unique_ptr<hk_gray_image, Deleter<hk_gray_image, hk_gray_free>>;
using HogPtr = std::unique_ptr<hk_hog_grid, Deleter<hk_hog_grid, hk_hog_free>>;
using TemplatePtr = std::unique_ptr<hk_template, Deleter<hk_template, hk_template_free>>;
using TrainerPtr = std::unique_ptr<hk_trainer, Deleter<hk_trainer, hk_trainer_free>>;
using DetectionsPtr = std::unique_ptr<hk_detections, Deleter<hk_detections, hk_detections_free>>;

struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(hk_status status, const std::string& context) {
  if (status != HK_OK) {
    throw CommandError(context + ": " + hk_status_name(status) + ": " + hk_last_error());
  }
}

template <typename Ptr, typename Fn>
Ptr make(Fn&& fn, const std::string& context) {
  typename Ptr::pointer raw = nullptr;
  check(fn(&raw), context);
  return Ptr(raw);
}

GrayPtr load_gray(const std::string& path) {
  auto rgb = make<RgbPtr>([&](hk_rgb_image** o) { return hk_image_load(path.c_str(), o); },
                          "loading " + path);
  return make<GrayPtr>([&](hk_gray_image** o) { return hk_rgb_to_gray(rgb.get(), o); },
                       "converting " + path);
}

struct HogFlags {
  hk_hog_params params = hk_hog_params_default();
  double fixed_threshold = -1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--cell-size", params.cell_size, "Cell side in pixels")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--bins", params.bins, "Orientation bins over (-pi, pi]")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tau", params.tau, "Vote threshold as a fraction of the max magnitude")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--fixed-threshold", fixed_threshold,
                    "Absolute magnitude threshold (overrides --tau)");
    cmd->add_flag("--normalize", params.normalize, "L2-normalize each cell histogram");
  }

  hk_hog_params resolved() const {
    hk_hog_params p = params;
    p.fixed_threshold = fixed_threshold;
    return p;
  }
};

// hog

struct HogOptions {
  std::string input;
  std::string out;
  std::string draw;
  std::size_t glyph_size = 15;
  double gamma = 1.0;
  HogFlags hog;
};

int run_hog(const HogOptions& opt) {
  if (opt.out.empty() && opt.draw.empty()) throw CommandError("nothing to do: pass --out and/or --draw");
  auto img = load_gray(opt.input);
  const hk_hog_params params = opt.hog.resolved();
  auto grid = make<HogPtr>([&](hk_hog_grid** o) { return hk_hog_compute(img.get(), &params, o); },
                           "computing HOG");
  if (!opt.out.empty()) check(hk_hog_save(grid.get(), opt.out.c_str()), "writing " + opt.out);
  if (!opt.draw.empty()) {
    auto glyphs = make<GrayPtr>(
        [&](hk_gray_image** o) { return hk_glyph_render(grid.get(), opt.glyph_size, opt.gamma, o); },
        "rendering glyphs");
    check(hk_gray_save(glyphs.get(), opt.draw.c_str()), "writing " + opt.draw);
  }
  std::cerr << "hog: " << hk_hog_cells_x(grid.get()) << "x" << hk_hog_cells_y(grid.get())
            << " cells, threshold " << hk_hog_threshold(grid.get()) << "\n";
  return 0;
}

// train

struct TrainOptions {
  std::vector<std::string> annotations;
  std::string out;
  std::size_t window = 64;
  HogFlags hog;
};

hk_annotation parse_annotation(const json& a, const std::string& where) {
  hk_annotation ann{};
  const std::string kind = a.at("kind").get<std::string>();
  if (kind == "point") {
    ann.kind = HK_ANN_POINT;
  } else if (kind == "rect") {
    ann.kind = HK_ANN_RECT;
  } else {
    throw CommandError(where + ": unknown kind \"" + kind + "\"");
  }
  const std::string polarity = a.value("polarity", std::string("positive"));
  if (polarity == "positive") {
    ann.polarity = HK_POSITIVE;
  } else if (polarity == "negative") {
    ann.polarity = HK_NEGATIVE;
  } else {
    throw CommandError(where + ": unknown polarity \"" + polarity + "\"");
  }
  ann.x = a.at("x").get<std::int64_t>();
  ann.y = a.at("y").get<std::int64_t>();
  if (ann.kind == HK_ANN_RECT) {
    ann.w = a.at("w").get<std::int64_t>();
    ann.h = a.at("h").get<std::int64_t>();
  }
  return ann;
}

int run_train(const TrainOptions& opt) {
  const hk_hog_params params = opt.hog.resolved();
  auto trainer = make<TrainerPtr>(
      [&](hk_trainer** o) { return hk_trainer_create(opt.window, &params, o); }, "creating trainer");

  for (const std::string& file : opt.annotations) {
    std::ifstream in(file);
    if (!in) throw CommandError("cannot open annotation file " + file);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw CommandError(file + ": " + e.what());
    }

    fs::path image_path;
    std::vector<hk_annotation> anns;
    try {
      image_path = doc.at("image").get<std::string>();
      const auto& list = doc.at("annotations");
      for (std::size_t i = 0; i < list.size(); ++i) {
        anns.push_back(parse_annotation(list.at(i), file + ": annotation " + std::to_string(i)));
      }
    } catch (const json::exception& e) {
      throw CommandError(file + ": " + e.what());
    }
    // Relative image paths resolve against the annotation file's directory.
    if (image_path.is_relative()) image_path = fs::path(file).parent_path() / image_path;

    auto img = load_gray(image_path.string());
    for (std::size_t i = 0; i < anns.size(); ++i) {
      check(hk_trainer_add(trainer.get(), img.get(), &anns[i], i), file);
    }
  }

  std::cout << "positives: " << hk_trainer_positives(trainer.get())
            << ", negatives: " << hk_trainer_negatives(trainer.get()) << "\n";
  auto tmpl = make<TemplatePtr>([&](hk_template** o) { return hk_trainer_build(trainer.get(), o); },
                                "building template");
  check(hk_template_save(tmpl.get(), opt.out.c_str()), "writing " + opt.out);
  return 0;
}

// detect

struct DetectOptions {
  std::string input;
  std::string tmpl;
  std::string overlay;
  hk_detect_params params = hk_detect_params_default();
  bool multiscale = false;
  HogFlags hog;
};

int run_detect(const DetectOptions& opt) {
  auto rgb = make<RgbPtr>([&](hk_rgb_image** o) { return hk_image_load(opt.input.c_str(), o); },
                          "loading " + opt.input);
  auto img = make<GrayPtr>([&](hk_gray_image** o) { return hk_rgb_to_gray(rgb.get(), o); },
                           "converting " + opt.input);
  auto tmpl = make<TemplatePtr>(
      [&](hk_template** o) { return hk_template_load(opt.tmpl.c_str(), o); }, "loading " + opt.tmpl);

  hk_detect_params params = opt.params;
  params.multiscale = opt.multiscale ? 1 : 0;
  params.hog = opt.hog.resolved();
  auto dets = make<DetectionsPtr>(
      [&](hk_detections** o) { return hk_detect(img.get(), tmpl.get(), &params, o); }, "detecting");

  const std::size_t n = hk_detections_count(dets.get());
  for (std::size_t i = 0; i < n; ++i) {
    hk_detection d{};
    check(hk_detections_get(dets.get(), i, &d), "reading detections");
    std::printf("{\"rank\":%zu,\"x\":%lld,\"y\":%lld,\"w\":%lld,\"h\":%lld,\"score\":%.6f,\"level\":%zu}\n",
                d.rank, static_cast<long long>(d.x), static_cast<long long>(d.y),
                static_cast<long long>(d.w), static_cast<long long>(d.h), d.score, d.level);
  }
  std::fflush(stdout);

  if (!opt.overlay.empty()) {
    auto drawn = make<RgbPtr>(
        [&](hk_rgb_image** o) { return hk_render_overlay(rgb.get(), dets.get(), o); },
        "drawing overlay");
    check(hk_rgb_save(drawn.get(), opt.overlay.c_str()), "writing " + opt.overlay);
  }
  std::cerr << "detect: " << n << " detection(s)\n";
  return 0;
}

// bench

struct BenchOptions {
  std::string size = "1024x1024";
  std::size_t iters = 10;
  std::uint64_t seed = 1;
  HogFlags hog;
};

std::uint64_t fnv1a(const double* data, std::size_t count) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto* bytes = reinterpret_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < count * sizeof(double); ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

int run_bench(const BenchOptions& opt) {
  static const std::regex kSize(R"((\d+)x(\d+))");
  std::smatch m;
  if (!std::regex_match(opt.size, m, kSize)) throw CommandError("--size must look like WxH");
  const std::size_t w = std::stoul(m[1]);
  const std::size_t h = std::stoul(m[2]);
  if (opt.iters == 0) throw CommandError("--iters must be >= 1");

  std::mt19937_64 rng(opt.seed);
  std::vector<double> samples(w * h);
  for (double& s : samples) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  auto img = make<GrayPtr>(
      [&](hk_gray_image** o) { return hk_gray_create(w, h, samples.data(), o); }, "creating image");

  const hk_hog_params params = opt.hog.resolved();
  std::vector<double> ms;
  std::uint64_t first_hash = 0;
  for (std::size_t i = 0; i < opt.iters; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    auto grid = make<HogPtr>([&](hk_hog_grid** o) { return hk_hog_compute(img.get(), &params, o); },
                             "computing HOG");
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    const std::size_t count =
        hk_hog_cells_x(grid.get()) * hk_hog_cells_y(grid.get()) * hk_hog_bins(grid.get());
    const std::uint64_t hash = fnv1a(hk_hog_data(grid.get()), count);
    if (i == 0) {
      first_hash = hash;
    } else if (hash != first_hash) {
      throw CommandError("features differ between runs");
    }
  }
  std::vector<double> sorted = ms;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size();
  const double median = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);

  std::printf("size: %zux%zu\niters: %zu\nthreads: %zu\nmin_ms: %.3f\nmedian_ms: %.3f\nfeatures: %016llx\n",
              w, h, opt.iters, hk_get_threads(), sorted.front(), median,
              static_cast<unsigned long long>(first_hash));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HOG feature extraction and template detection"};
  app.require_subcommand(1);

  HogOptions hog_opt;
  auto* hog = app.add_subcommand("hog", "Compute HOG features of an image");
  hog->add_option("--input", hog_opt.input, "Input image (PNG, PGM, PPM)")->required();
  hog->add_option("--out", hog_opt.out, "Output HOG1 feature file");
  hog->add_option("--draw", hog_opt.draw, "Write a glyph rendering (.pgm/.png)");
  hog->add_option("--glyph-size", hog_opt.glyph_size, "Glyph pixels per cell (odd, >= 3)")
      ->capture_default_str();
  hog->add_option("--gamma", hog_opt.gamma, "Glyph intensity exponent")->capture_default_str();
  hog_opt.hog.add_to(hog);

  TrainOptions train_opt;
  auto* train = app.add_subcommand("train", "Build a template from annotation files");
  train->add_option("--annotations", train_opt.annotations, "Annotation JSON (repeatable)")
      ->required()
      ->take_all();
  train->add_option("--out", train_opt.out, "Output HTPL template file")->required();
  train->add_option("--window", train_opt.window, "Training window side in pixels")
      ->capture_default_str();
  train_opt.hog.add_to(train);

  DetectOptions det_opt;
  auto* det = app.add_subcommand("detect", "Detect a template in an image");
  det->add_option("--input", det_opt.input, "Input image")->required();
  det->add_option("--template", det_opt.tmpl, "HTPL template file")->required();
  det->add_option("--top", det_opt.params.top_n, "Detections to report")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  det->add_option("--min-dist", det_opt.params.min_dist,
                  "Minimum Chebyshev distance between box centers (px)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  det->add_flag("--multiscale", det_opt.multiscale, "Search an image pyramid");
  det->add_option("--scale", det_opt.params.scale, "Pyramid scale factor")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  det->add_option("--max-levels", det_opt.params.max_levels, "Pyramid level cap")
      ->capture_default_str();
  det->add_option("--overlay", det_opt.overlay, "Write the input with ranked boxes (.ppm/.png)");
  det_opt.hog.add_to(det);

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "Time gradient + HOG on a seeded random image");
  bench->add_option("--size", bench_opt.size, "Image size WxH")->capture_default_str();
  bench->add_option("--iters", bench_opt.iters, "Timed runs")->capture_default_str();
  bench->add_option("--seed", bench_opt.seed, "Image generator seed")->capture_default_str();
  bench_opt.hog.add_to(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*hog) return run_hog(hog_opt);
    if (*train) return run_train(train_opt);
    if (*det) return run_detect(det_opt);
    if (*bench) return run_bench(bench_opt);
  } catch (const std::exception& e) {
    std::cerr << "hogkit: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
