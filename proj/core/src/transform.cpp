#include "pvinspect/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "pvinspect/error.hpp"

namespace pvinspect {
namespace {

constexpr double kRightAngleTolerance = 1e-9;

int quarter_turns_of(double angle_deg) noexcept {
  const double turns = angle_deg / 90.0;
  const double nearest = std::round(turns);
  if (std::abs(turns - nearest) > kRightAngleTolerance) return -1;
  const auto q = static_cast<long long>(nearest) % 4;
  return static_cast<int>(q < 0 ? q + 4 : q);
}

}  // namespace

FrameSize rotated_canvas(FrameSize frame, double angle_deg) {
  const int q = quarter_turns_of(angle_deg);
  if (q == 0 || q == 2) return frame;
  if (q == 1 || q == 3) return {frame.height, frame.width};
  const double rad = angle_deg * std::numbers::pi / 180.0;
  const double c = std::abs(std::cos(rad));
  const double s = std::abs(std::sin(rad));
  const double w = frame.width * c + frame.height * s;
  const double h = frame.width * s + frame.height * c;
  return {static_cast<int>(std::ceil(w - 1e-9)), static_cast<int>(std::ceil(h - 1e-9))};
}

RigidTransform RigidTransform::make(double angle_deg, bool flip_h, bool flip_v,
                                    FrameSize source, FrameSize destination) {
  if (!std::isfinite(angle_deg)) throw InvalidArgument("transform angle is not finite");
  if (source.width < 1 || source.height < 1 || destination.width < 1 ||
      destination.height < 1) {
    throw InvalidArgument("transform frames must be at least 1x1");
  }
  const int q = quarter_turns_of(angle_deg);
  if (q >= 0 && rotated_canvas(source, angle_deg) != destination) {
    throw InvalidArgument("destination " + std::to_string(destination.width) + "x" +
                          std::to_string(destination.height) + " inconsistent with a " +
                          std::to_string(q * 90) + " degree rotation of " +
                          std::to_string(source.width) + "x" + std::to_string(source.height));
  }
  RigidTransform t;
  t.angle_deg_ = angle_deg;
  t.flip_h_ = flip_h;
  t.flip_v_ = flip_v;
  t.source_ = source;
  t.destination_ = destination;
  t.quarter_turns_ = q;
  t.set_coefficients();
  return t;
}

RigidTransform RigidTransform::identity(FrameSize frame) { return make(0.0, false, false, frame, frame); }

RigidTransform RigidTransform::flip(bool horizontal, bool vertical, FrameSize frame) {
  return make(0.0, horizontal, vertical, frame, frame);
}

RigidTransform RigidTransform::rotation(double angle_deg, FrameSize frame) {
  return make(angle_deg, false, false, frame, rotated_canvas(frame, angle_deg));
}

void RigidTransform::set_coefficients() noexcept {
  double cs = 0.0;
  double sn = 0.0;
  switch (quarter_turns_) {
    case 0: cs = 1.0; sn = 0.0; break;
    case 1: cs = 0.0; sn = 1.0; break;
    case 2: cs = -1.0; sn = 0.0; break;
    case 3: cs = 0.0; sn = -1.0; break;
    default: {
      const double rad = angle_deg_ * std::numbers::pi / 180.0;
      cs = std::cos(rad);
      sn = std::sin(rad);
    }
  }
  // y points down, so an on-screen counter-clockwise turn is
  // [[cos, sin], [-sin, cos]] in pixel coordinates.
  const double sx = flip_h_ ? -1.0 : 1.0;
  const double sy = flip_v_ ? -1.0 : 1.0;
  a_ = cs * sx;
  b_ = sn * sy;
  c_ = -sn * sx;
  d_ = cs * sy;
}

bool RigidTransform::is_identity() const noexcept {
  return quarter_turns_ == 0 && !flip_h_ && !flip_v_ && source_ == destination_;
}

Point RigidTransform::apply(Point p) const noexcept {
  if (quarter_turns_ >= 0) {
    // One nonzero coefficient per row: fold the centers into an exact
    // half-integer offset so each coordinate takes a single rounding.
    const double ox = 0.5 * destination_.width - 0.5 * (a_ * source_.width + b_ * source_.height);
    const double oy = 0.5 * destination_.height - 0.5 * (c_ * source_.width + d_ * source_.height);
    return {ox + (a_ != 0.0 ? a_ * p.x : b_ * p.y), oy + (c_ != 0.0 ? c_ * p.x : d_ * p.y)};
  }
  const double ux = p.x - 0.5 * source_.width;
  const double uy = p.y - 0.5 * source_.height;
  return {0.5 * destination_.width + a_ * ux + b_ * uy,
          0.5 * destination_.height + c_ * ux + d_ * uy};
}

RigidTransform invert(const RigidTransform& t) {
  const bool mirrored = t.flip_h() != t.flip_v();
  const double angle = mirrored ? t.angle_deg() : -t.angle_deg();
  return RigidTransform::make(angle == 0.0 ? 0.0 : angle, t.flip_h(), t.flip_v(), t.destination(),
                              t.source());
}

BoundingBox transform_box(const BoundingBox& box, const RigidTransform& t) {
  const std::array<Point, 4> corners{Point{box.x_min, box.y_min}, Point{box.x_max, box.y_min},
                                     Point{box.x_min, box.y_max}, Point{box.x_max, box.y_max}};
  BoundingBox hull{INFINITY, INFINITY, -INFINITY, -INFINITY};
  for (const auto& c : corners) {
    const Point m = t.apply(c);
    hull.x_min = std::min(hull.x_min, m.x);
    hull.y_min = std::min(hull.y_min, m.y);
    hull.x_max = std::max(hull.x_max, m.x);
    hull.y_max = std::max(hull.y_max, m.y);
  }
  return clip(hull, t.destination().width, t.destination().height);
}

}  // namespace pvinspect
