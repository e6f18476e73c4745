#include "pvinspect/box.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "pvinspect/error.hpp"

namespace pvinspect {

double BoundingBox::area() const noexcept {
  return std::max(0.0, width()) * std::max(0.0, height());
}

bool BoundingBox::valid() const noexcept {
  return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
         std::isfinite(y_max) && x_min <= x_max && y_min <= y_max;
}

BoundingBox make_box(double x_min, double y_min, double x_max, double y_max) {
  BoundingBox box{x_min, y_min, x_max, y_max};
  if (!box.valid()) {
    throw InvalidArgument("invalid box corners (" + std::to_string(x_min) + ", " +
                          std::to_string(y_min) + ", " + std::to_string(x_max) + ", " +
                          std::to_string(y_max) + ")");
  }
  return box;
}

void validate(const Detection& det) {
  if (!det.box.valid()) throw InvalidArgument("detection has an invalid box");
  if (det.class_label.empty()) throw InvalidArgument("detection has an empty class label");
  if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
    throw InvalidArgument("confidence " + std::to_string(det.confidence) + " outside [0, 1]");
  }
}

BoundingBox intersection(const BoundingBox& a, const BoundingBox& b) noexcept {
  BoundingBox r{std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min),
                std::min(a.x_max, b.x_max), std::min(a.y_max, b.y_max)};
  if (r.x_max < r.x_min || r.y_max < r.y_min) return BoundingBox{r.x_min, r.y_min, r.x_min, r.y_min};
  return r;
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double coverage_of(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double area = a.area();
  if (area <= 0.0) return 0.0;
  return std::clamp(intersection_area(a, b) / area, 0.0, 1.0);
}

BoundingBox clip(const BoundingBox& box, double width, double height) noexcept {
  BoundingBox r{std::clamp(box.x_min, 0.0, width), std::clamp(box.y_min, 0.0, height),
                std::clamp(box.x_max, 0.0, width), std::clamp(box.y_max, 0.0, height)};
  return r;
}

BoundingBox dilate(const BoundingBox& box, double margin) noexcept {
  BoundingBox r{box.x_min - margin, box.y_min - margin, box.x_max + margin, box.y_max + margin};
  if (r.x_max < r.x_min) r.x_min = r.x_max = 0.5 * (box.x_min + box.x_max);
  if (r.y_max < r.y_min) r.y_min = r.y_max = 0.5 * (box.y_min + box.y_max);
  return r;
}

double union_area(const std::vector<BoundingBox>& boxes) {
  std::vector<double> xs;
  xs.reserve(boxes.size() * 2);
  for (const auto& b : boxes) {
    if (b.area() <= 0.0) continue;
    xs.push_back(b.x_min);
    xs.push_back(b.x_max);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double total = 0.0;
  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i];
    const double x1 = xs[i + 1];
    spans.clear();
    for (const auto& b : boxes) {
      if (b.area() > 0.0 && b.x_min <= x0 && b.x_max >= x1) spans.emplace_back(b.y_min, b.y_max);
    }
    std::sort(spans.begin(), spans.end());
    double covered = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool open = false;
    for (const auto& [s0, s1] : spans) {
      if (!open || s0 > hi) {
        if (open) covered += hi - lo;
        lo = s0;
        hi = s1;
        open = true;
      } else {
        hi = std::max(hi, s1);
      }
    }
    if (open) covered += hi - lo;
    total += covered * (x1 - x0);
  }
  return total;
}

bool ranks_before(const Detection& a, const Detection& b) noexcept {
  const auto key = [](const Detection& d) {
    return std::tie(d.confidence, d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max);
  };
  if (key(a) != key(b)) return key(a) > key(b);
  return a.class_label < b.class_label;
}

}  // namespace pvinspect
