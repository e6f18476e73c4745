#include <algorithm>
#include <cmath>
#include <limits>

#include "pvinspect/detector.hpp"
#include "pvinspect/error.hpp"

namespace pvinspect::detector {
namespace {

constexpr double kNoData = std::numeric_limits<double>::quiet_NaN();

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double hi = *mid;
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

bool matches_junction(const BuiltinConfig& cfg, double w, double h) {
  if (cfg.junction_width <= 0.0 || cfg.junction_height <= 0.0) return false;
  return std::abs(w - cfg.junction_width) <= cfg.junction_tolerance * cfg.junction_width &&
         std::abs(h - cfg.junction_height) <= cfg.junction_tolerance * cfg.junction_height;
}

void check(const BuiltinConfig& cfg) {
  if (!(cfg.trigger > 0.0) || !std::isfinite(cfg.trigger)) {
    throw InvalidArgument("builtin detector trigger must be positive");
  }
  if (cfg.min_area < 1) throw InvalidArgument("builtin detector min_area must be at least 1");
  if (cfg.label.empty()) throw InvalidArgument("builtin detector label is empty");
  if (cfg.junction_width < 0.0 || cfg.junction_height < 0.0 || cfg.junction_tolerance < 0.0) {
    throw InvalidArgument("junction prior must be non-negative");
  }
}

// Blobs over a value field where NaN marks no-data.
DetectionSet blobs(const Raster<double>& field, const BuiltinConfig& cfg, std::string image_id) {
  check(cfg);
  const int w = field.width();
  const int h = field.height();
  DetectionSet out{std::move(image_id), RigidTransform::identity(field.size()), {}};

  std::vector<double> valid;
  valid.reserve(field.pixel_count());
  for (double v : field.pixels()) {
    if (!std::isnan(v)) valid.push_back(v);
  }
  if (valid.empty()) return out;
  const double med = median_of(std::move(valid));
  const double sign = cfg.polarity == Polarity::above ? 1.0 : -1.0;

  // Signed excess over the median; hot pixels have excess > trigger.
  auto excess = [&](int x, int y) { return sign * (field(x, y) - med); };
  Raster<std::uint8_t> seen(w, h, 0);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (seen(x, y) || std::isnan(field(x, y)) || !(excess(x, y) > cfg.trigger)) continue;
      int x0 = x, x1 = x, y0 = y, y1 = y;
      long area = 0;
      double peak = 0.0;
      seen(x, y) = 1;
      stack.assign(1, {x, y});
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        ++area;
        peak = std::max(peak, excess(cx, cy));
        x0 = std::min(x0, cx);
        x1 = std::max(x1, cx);
        y0 = std::min(y0, cy);
        y1 = std::max(y1, cy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (!field.contains(nx, ny) || seen(nx, ny)) continue;
            if (std::isnan(field(nx, ny)) || !(excess(nx, ny) > cfg.trigger)) continue;
            seen(nx, ny) = 1;
            stack.emplace_back(nx, ny);
          }
        }
      }
      if (area < cfg.min_area) continue;
      BoundingBox box{static_cast<double>(x0), static_cast<double>(y0), x1 + 1.0, y1 + 1.0};
      const std::string label =
          matches_junction(cfg, box.width(), box.height()) ? "junction" : cfg.label;
      out.detections.push_back({box, label, std::min(1.0, peak / 50.0)});
    }
  }
  return out;
}

}  // namespace

DetectionSet detect_thermal_baseline(const Gray16Image& img, const imaging::Calibration& cal,
                                     const BuiltinConfig& cfg, std::string image_id) {
  imaging::validate(cal);
  Raster<double> field(img.width(), img.height());
  auto src = img.pixels();
  auto dst = field.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] == 0 ? kNoData : cal.gain * src[i] + cal.offset;
  }
  return blobs(field, cfg, std::move(image_id));
}

DetectionSet detect_builtin(const Image& img, const BuiltinConfig& cfg, std::string image_id) {
  if (const auto* g16 = std::get_if<Gray16Image>(&img)) {
    return detect_thermal_baseline(*g16, cfg.calibration, cfg, std::move(image_id));
  }
  const Gray8Image gray = imaging::to_gray8(img);
  Raster<double> field(gray.width(), gray.height());
  auto src = gray.pixels();
  auto dst = field.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == 0 ? kNoData : src[i];
  return blobs(field, cfg, std::move(image_id));
}

}  // namespace pvinspect::detector
