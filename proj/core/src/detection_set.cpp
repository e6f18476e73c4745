#include "pvinspect/detection_set.hpp"

namespace pvinspect {

std::vector<Detection> to_canonical(const DetectionSet& set) {
  if (set.transform.is_identity()) return set.detections;
  const RigidTransform back = invert(set.transform);
  std::vector<Detection> out = set.detections;
  for (auto& d : out) d.box = transform_box(d.box, back);
  return out;
}

DetectionSet from_canonical(std::string image_id, const RigidTransform& transform,
                            const std::vector<Detection>& detections) {
  DetectionSet set{std::move(image_id), transform, detections};
  if (!transform.is_identity()) {
    for (auto& d : set.detections) d.box = transform_box(d.box, transform);
  }
  return set;
}

}  // namespace pvinspect
