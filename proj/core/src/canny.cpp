#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "pvinspect/error.hpp"
#include "pvinspect/imaging.hpp"

namespace pvinspect::imaging {
namespace {

constexpr std::array<double, 5> kBinomial{1.0, 4.0, 6.0, 4.0, 1.0};

// Unnormalized separable pass; the caller divides by 256.
Raster<double> binomial_sum(const FloatImage& img) {
  if (img.width() < 5 || img.height() < 5) {
    throw InvalidArgument("gaussian_5x5 needs at least a 5x5 image, got " +
                          std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
  const int w = img.width();
  const int h = img.height();
  Raster<double> horizontal(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -2; k <= 2; ++k) s += kBinomial[k + 2] * img.clamped(x + k, y);
      horizontal(x, y) = s;
    }
  }
  Raster<double> out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -2; k <= 2; ++k) s += kBinomial[k + 2] * horizontal.clamped(x, y + k);
      out(x, y) = s;
    }
  }
  return out;
}

template <typename Pixel>
Raster<Pixel> gaussian_rounded(const Raster<Pixel>& img, double max_value) {
  const Raster<double> sum = binomial_sum(to_float(img));
  Raster<Pixel> out(img.width(), img.height());
  auto dst = out.pixels();
  auto src = sum.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<Pixel>(std::clamp(std::round(src[i] / 256.0), 0.0, max_value));
  }
  return out;
}

Direction quantize(float gx, float gy) {
  double deg = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 180.0;
  if (deg >= 180.0) deg -= 180.0;
  if (deg < 22.5 || deg >= 157.5) return Direction::deg0;
  if (deg < 67.5) return Direction::deg45;
  if (deg < 112.5) return Direction::deg90;
  return Direction::deg135;
}

}  // namespace

FloatImage gaussian_5x5(const FloatImage& img) {
  const Raster<double> sum = binomial_sum(img);
  FloatImage out(img.width(), img.height());
  auto dst = out.pixels();
  auto src = sum.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<float>(src[i] / 256.0);
  return out;
}

Gray8Image gaussian_5x5(const Gray8Image& img) { return gaussian_rounded(img, 255.0); }
Gray16Image gaussian_5x5(const Gray16Image& img) { return gaussian_rounded(img, 65535.0); }

GradientField sobel_gradient(const FloatImage& img) {
  if (img.width() < 3 || img.height() < 3) {
    throw InvalidArgument("sobel_gradient needs at least a 3x3 image");
  }
  const int w = img.width();
  const int h = img.height();
  GradientField g{FloatImage(w, h), FloatImage(w, h), FloatImage(w, h), Raster<Direction>(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto p = [&](int dx, int dy) { return img.clamped(x + dx, y + dy); };
      const float gx = (p(1, -1) + 2.0f * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0f * p(-1, 0) + p(-1, 1));
      const float gy = (p(-1, 1) + 2.0f * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0f * p(0, -1) + p(1, -1));
      g.gx(x, y) = gx;
      g.gy(x, y) = gy;
      g.magnitude(x, y) = std::sqrt(gx * gx + gy * gy);
      g.direction(x, y) = quantize(gx, gy);
    }
  }
  return g;
}

void validate(const CannyConfig& cfg) {
  if (!(cfg.g_min > 0.0 && cfg.g_min < cfg.g_max)) {
    throw InvalidArgument("canny thresholds must satisfy 0 < g_min < g_max");
  }
  if (!(cfg.step > 0.0)) throw InvalidArgument("canny step must be positive");
  if (cfg.n_thr < 1) throw InvalidArgument("canny n_thr must be at least 1");
  if (!std::isfinite(cfg.floor) || cfg.floor > cfg.g_min) {
    throw InvalidArgument("canny floor must be finite and not above g_min");
  }
}

EdgeCandidates edge_candidates(const FloatImage& img) {
  const GradientField g = sobel_gradient(gaussian_5x5(img));
  const int w = img.width();
  const int h = img.height();
  EdgeCandidates c{g.magnitude, Raster<std::uint8_t>(w, h, 0)};
  // The outermost ring is never an edge: its neighbors are replicated.
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      int dx = 1;
      int dy = 0;
      switch (g.direction(x, y)) {
        case Direction::deg0: dx = 1; dy = 0; break;
        case Direction::deg45: dx = 1; dy = 1; break;
        case Direction::deg90: dx = 0; dy = 1; break;
        case Direction::deg135: dx = -1; dy = 1; break;
      }
      const float m = g.magnitude(x, y);
      // Asymmetric comparison keeps exactly one pixel of a two-pixel plateau.
      if (m > g.magnitude(x - dx, y - dy) && m >= g.magnitude(x + dx, y + dy)) {
        c.is_peak(x, y) = 1;
      }
    }
  }
  return c;
}

EdgeMap hysteresis(const EdgeCandidates& candidates, double g_min, double g_max) {
  const int w = candidates.magnitude.width();
  const int h = candidates.magnitude.height();
  EdgeMap edges(w, h, 0);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (candidates.is_peak(x, y) && candidates.magnitude(x, y) > g_max && !edges(x, y)) {
        edges(x, y) = 1;
        stack.emplace_back(x, y);
      }
    }
  }
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (!edges.contains(nx, ny) || edges(nx, ny)) continue;
        if (candidates.is_peak(nx, ny) && candidates.magnitude(nx, ny) > g_min) {
          edges(nx, ny) = 1;
          stack.emplace_back(nx, ny);
        }
      }
    }
  }
  return edges;
}

std::size_t count_edges(const EdgeMap& edges) {
  const auto px = edges.pixels();
  return static_cast<std::size_t>(std::count_if(px.begin(), px.end(), [](auto v) { return v != 0; }));
}

CannyResult canny_adaptive(const FloatImage& img, const CannyConfig& cfg) {
  validate(cfg);
  const EdgeCandidates candidates = edge_candidates(img);
  CannyResult r{EdgeMap(img.width(), img.height(), 0), cfg.g_min, cfg.g_max, 0, 0, {}};
  while (true) {
    r.edges = hysteresis(candidates, r.g_min, r.g_max);
    r.edge_count = count_edges(r.edges);
    r.g_min_history.push_back(r.g_min);
    ++r.iterations;
    if (r.edge_count >= cfg.n_thr) return r;
    if (!(r.g_min > cfg.floor)) break;
    r.g_min -= cfg.step;
    r.g_max -= cfg.step;
  }
  throw FeaturelessImageError("only " + std::to_string(r.edge_count) + " edge pixels at g_min " +
                              std::to_string(r.g_min) + ", need " + std::to_string(cfg.n_thr));
}

CannyResult canny_adaptive(const Gray8Image& img, const CannyConfig& cfg) {
  return canny_adaptive(to_float(img), cfg);
}

std::size_t elbow_index(std::span<const double> values) {
  if (values.size() < 3) throw InvalidArgument("elbow needs at least 3 points");
  const double n = static_cast<double>(values.size() - 1);
  const double dy = values.back() - values.front();
  // Perpendicular distances share the chord length, so the unnormalized cross
  // product ranks them (exactly, for integer data).
  std::size_t best = 1;
  double best_dist = -1.0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double cross = std::abs(n * (values[i] - values.front()) - dy * static_cast<double>(i));
    if (cross > best_dist) {
      best_dist = cross;
      best = i;
    }
  }
  return best;
}

std::size_t elbow_n_thr(std::span<const std::size_t> sorted_edge_counts) {
  if (sorted_edge_counts.size() < 3) throw InvalidArgument("elbow needs at least 3 points");
  if (!std::is_sorted(sorted_edge_counts.begin(), sorted_edge_counts.end())) {
    throw InvalidArgument("edge counts must be sorted increasing");
  }
  std::vector<double> v(sorted_edge_counts.begin(), sorted_edge_counts.end());
  return sorted_edge_counts[elbow_index(v)];
}

}  // namespace pvinspect::imaging
