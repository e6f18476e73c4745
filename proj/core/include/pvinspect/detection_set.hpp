#pragma once

#include <string>
#include <vector>

#include "pvinspect/box.hpp"
#include "pvinspect/transform.hpp"

namespace pvinspect {

/// Detections of one image together with the transform that maps the
/// canonical image frame onto the frame the boxes are expressed in.
struct DetectionSet {
  std::string image_id;
  RigidTransform transform = RigidTransform::identity({1, 1});
  std::vector<Detection> detections;
};

/// Boxes re-expressed in the canonical frame (inverse of `set.transform`).
std::vector<Detection> to_canonical(const DetectionSet& set);

/// `detections` given in the canonical frame, mapped through `transform`.
DetectionSet from_canonical(std::string image_id, const RigidTransform& transform,
                            const std::vector<Detection>& detections);

}  // namespace pvinspect
