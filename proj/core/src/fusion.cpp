#include "pvinspect/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "pvinspect/error.hpp"
#include "pvinspect/imaging.hpp"

namespace pvinspect::fusion {
namespace {

void check_threshold(double thr) {
  if (!(thr > 0.0 && thr <= 1.0)) throw InvalidArgument("IoU threshold must lie in (0, 1]");
}

}  // namespace

template <typename Pixel>
std::array<View<Pixel>, 3> tta_views(const Raster<Pixel>& img) {
  const FrameSize frame = img.size();
  return {View<Pixel>{img, RigidTransform::identity(frame), "original"},
          View<Pixel>{imaging::flip_image(img, true, false), RigidTransform::flip(true, false, frame),
                      "hflip"},
          View<Pixel>{imaging::flip_image(img, false, true), RigidTransform::flip(false, true, frame),
                      "vflip"}};
}

template std::array<View<std::uint8_t>, 3> tta_views(const Raster<std::uint8_t>&);
template std::array<View<std::uint16_t>, 3> tta_views(const Raster<std::uint16_t>&);
template std::array<View<Rgb8>, 3> tta_views(const Raster<Rgb8>&);

std::vector<Detection> map_into(const DetectionSet& candidates, const RigidTransform& target) {
  if (candidates.transform.source() != target.source()) {
    throw InvalidArgument("candidate set '" + candidates.image_id +
                          "' is not expressed over the same input frame");
  }
  std::vector<Detection> out = to_canonical(candidates);
  if (!target.is_identity()) {
    for (auto& d : out) d.box = transform_box(d.box, target);
  }
  return out;
}

DetectionSet merge_tta(const DetectionSet& real, std::span<const DetectionSet> candidates,
                       const MergeOptions& opts) {
  check_threshold(opts.iou_thr);
  std::vector<Detection> pool;
  for (const auto& set : candidates) {
    auto mapped = map_into(set, real.transform);
    pool.insert(pool.end(), std::make_move_iterator(mapped.begin()),
                std::make_move_iterator(mapped.end()));
  }
  std::sort(pool.begin(), pool.end(), ranks_before);

  DetectionSet out = real;
  for (auto& c : pool) {
    bool keep = true;
    for (const auto& r : out.detections) {
      if (opts.class_aware && r.class_label != c.class_label) continue;
      if (iou(c.box, r.box) >= opts.iou_thr) {
        keep = false;
        break;
      }
    }
    if (keep) out.detections.push_back(std::move(c));
  }
  return out;
}

std::vector<Detection> nms_standard(std::vector<Detection> dets, double iou_thr) {
  check_threshold(iou_thr);
  std::sort(dets.begin(), dets.end(), ranks_before);
  std::vector<Detection> kept;
  for (auto& d : dets) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return k.class_label == d.class_label && iou(k.box, d.box) > iou_thr;
    });
    if (!suppressed) kept.push_back(std::move(d));
  }
  return kept;
}

}  // namespace pvinspect::fusion
