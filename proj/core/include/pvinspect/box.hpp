#pragma once

#include <string>
#include <vector>

namespace pvinspect {

/// Axis-aligned box in continuous pixel coordinates, origin top-left.
/// Corners are stored as-is; the max edge is exclusive in pixel terms, so a
/// box covering pixels 10..19 is (10, ., 20, .).
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double area() const noexcept;
  bool valid() const noexcept;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
  BoundingBox box;
  std::string class_label;
  double confidence = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct Annotation {
  BoundingBox box;
  std::string class_label;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Throws InvalidArgument when the corners are out of order or non-finite.
BoundingBox make_box(double x_min, double y_min, double x_max, double y_max);

/// Throws InvalidArgument on an invalid box, empty label, or confidence
/// outside [0, 1].
void validate(const Detection& det);

/// Overlap of two boxes; a zero-area box when they do not intersect.
BoundingBox intersection(const BoundingBox& a, const BoundingBox& b) noexcept;
double intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept;

/// |a ∩ b| / |a ∪ b|. Zero when the union has no area.
double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

/// |a ∩ b| / |a|, the fraction of `a` covered by `b`. Zero when `a` has no area.
double coverage_of(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Clip to the frame [0, width] x [0, height].
BoundingBox clip(const BoundingBox& box, double width, double height) noexcept;

/// Box grown by `margin` on every side (shrunk for negative margins, never
/// inverted).
BoundingBox dilate(const BoundingBox& box, double margin) noexcept;

/// Area of the union of a set of boxes (exact, by coordinate compression).
double union_area(const std::vector<BoundingBox>& boxes);

/// Strict weak order used for deterministic tie-breaking: descending
/// confidence, then descending x_min, y_min, x_max, y_max, then label.
bool ranks_before(const Detection& a, const Detection& b) noexcept;

}  // namespace pvinspect
