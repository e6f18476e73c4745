#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "pvinspect/detector.hpp"
#include "pvinspect/fusion.hpp"
#include "pvinspect/imaging.hpp"
#include "pvinspect/pipeline.hpp"

using namespace pvinspect;

namespace {

constexpr imaging::Calibration kCal{};

std::uint16_t raw_of(double c) { return static_cast<std::uint16_t>(std::lround((c - kCal.offset) / kCal.gain)); }

// Three warm panels with two hotspots, tilted by `skew_deg`.
Gray16Image thermal_scene(int w, int h, double skew_deg) {
  Gray16Image img(w, h);
  const double cs = std::cos(skew_deg * M_PI / 180), sn = std::sin(skew_deg * M_PI / 180);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = x + 0.5 - w / 2.0, dy = y + 0.5 - h / 2.0;
      const double u = cs * dx + sn * dy + w / 2.0, v = -sn * dx + cs * dy + h / 2.0;
      double t = 20.0;
      for (int p = 0; p < 3; ++p) {
        const double x0 = 0.1 * w + p * 0.28 * w;
        if (u >= x0 && u < x0 + 0.22 * w && v >= 0.2 * h && v < 0.8 * h) t = 28.0;
      }
      if (std::hypot(u - 0.2 * w, v - 0.4 * h) < 4 || std::hypot(u - 0.5 * w, v - 0.6 * h) < 4) t = 55.0;
      img(x, y) = raw_of(t + noise(rng));
    }
  }
  return img;
}

detector::DetectorHandle panel_detector() {
  detector::BuiltinConfig c;
  c.label = "panel";
  c.trigger = 4.0;
  c.min_area = 400;
  return detector::DetectorHandle::make_builtin(c);
}

void BM_CannyAdaptive(benchmark::State& state) {
  const auto gray = imaging::normalize_radiometric(thermal_scene(int(state.range(0)), int(state.range(0)) * 4 / 5, 7));
  for (auto _ : state) benchmark::DoNotOptimize(imaging::canny_adaptive(gray));
  state.SetItemsProcessed(state.iterations() * gray.width() * gray.height());
}
BENCHMARK(BM_CannyAdaptive)->Arg(320)->Arg(640)->Unit(benchmark::kMillisecond);

void BM_HoughDominantLine(benchmark::State& state) {
  const auto gray = imaging::normalize_radiometric(thermal_scene(640, 512, 7));
  const auto edges = imaging::canny_adaptive(gray).edges;
  for (auto _ : state) benchmark::DoNotOptimize(imaging::hough_dominant_line(edges));
}
BENCHMARK(BM_HoughDominantLine)->Unit(benchmark::kMillisecond);

void BM_RotateImage(benchmark::State& state) {
  const auto img = thermal_scene(640, 512, 0);
  const double angle = double(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(imaging::rotate_image(img, angle));
}
BENCHMARK(BM_RotateImage)->Arg(90)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_MergeTta(benchmark::State& state) {
  const FrameSize f{640, 512};
  const int n = int(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0, 600), side(5, 40), conf(0, 1);
  auto make = [&](const RigidTransform& t) {
    std::vector<Detection> d;
    for (int i = 0; i < n; ++i) {
      const double x = pos(rng), y = pos(rng) * 0.8;
      d.push_back({clip({x, y, x + side(rng), y + side(rng)}, f.width, f.height), "panel", conf(rng)});
    }
    return from_canonical("img", t, d);
  };
  const auto real = make(RigidTransform::identity(f));
  const std::vector<DetectionSet> cands{make(RigidTransform::flip(true, false, f)),
                                        make(RigidTransform::flip(false, true, f))};
  for (auto _ : state) benchmark::DoNotOptimize(fusion::merge_tta(real, cands));
  state.SetComplexityN(n);
}
BENCHMARK(BM_MergeTta)->Range(8, 512)->Complexity();

void BM_InspectImage(benchmark::State& state) {
  const Image img{thermal_scene(640, 512, 7)};
  const auto panels = panel_detector();
  const auto defects = detector::DetectorHandle::make_builtin({});
  const pipeline::PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::inspect_image(img, panels, defects, cfg, "bench.tiff"));
}
BENCHMARK(BM_InspectImage)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
