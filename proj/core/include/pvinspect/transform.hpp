#pragma once

#include "pvinspect/box.hpp"

namespace pvinspect {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct FrameSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const FrameSize&, const FrameSize&) = default;
};

/// Maps a source frame onto a destination frame: optional mirror flips in the
/// source frame, then a rotation by `angle_deg` (counter-clockwise as seen on
/// screen) about the source center, whose image lands on the destination
/// center.
///
/// Right-angle multiples use exact +-1/0 coefficients, so integer and
/// half-integer coordinates map bit-exactly.
class RigidTransform {
 public:
  /// Throws InvalidArgument when the frames are empty or, for right-angle
  /// rotations, when the destination does not match the rotated source.
  static RigidTransform make(double angle_deg, bool flip_h, bool flip_v, FrameSize source,
                             FrameSize destination);

  static RigidTransform identity(FrameSize frame);
  static RigidTransform flip(bool horizontal, bool vertical, FrameSize frame);
  /// Rotation onto a canvas just large enough to hold the whole rotated frame.
  static RigidTransform rotation(double angle_deg, FrameSize frame);

  double angle_deg() const noexcept { return angle_deg_; }
  bool flip_h() const noexcept { return flip_h_; }
  bool flip_v() const noexcept { return flip_v_; }
  FrameSize source() const noexcept { return source_; }
  FrameSize destination() const noexcept { return destination_; }

  /// Number of quarter turns in [0, 4) when the angle is a right-angle
  /// multiple, -1 otherwise.
  int quarter_turns() const noexcept { return quarter_turns_; }
  bool is_identity() const noexcept;

  Point apply(Point p) const noexcept;

 private:
  RigidTransform() = default;
  void set_coefficients() noexcept;

  double angle_deg_ = 0.0;
  bool flip_h_ = false;
  bool flip_v_ = false;
  FrameSize source_{};
  FrameSize destination_{};
  int quarter_turns_ = 0;
  // Linear part (rotation times flip) in centered coordinates.
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
};

/// Group inverse: flips are kept, the angle is negated unless exactly one
/// flip is set (a mirror conjugates a rotation into its inverse), and the
/// frames are swapped.
RigidTransform invert(const RigidTransform& t);

/// Axis-aligned hull of the four mapped corners, clipped to the destination
/// frame. Exact (no hull inflation) for right-angle transforms.
BoundingBox transform_box(const BoundingBox& box, const RigidTransform& t);

/// Canvas holding a frame rotated by `angle_deg`.
FrameSize rotated_canvas(FrameSize frame, double angle_deg);

}  // namespace pvinspect
