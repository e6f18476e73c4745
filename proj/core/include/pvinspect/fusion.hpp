#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "pvinspect/detection_set.hpp"
#include "pvinspect/raster.hpp"

namespace pvinspect::fusion {

template <typename Pixel>
struct View {
  Raster<Pixel> image;
  /// Maps the input frame onto the view.
  RigidTransform transform;
  std::string name;
};

/// Identity, horizontal flip and vertical flip of `img`, in that order.
template <typename Pixel>
std::array<View<Pixel>, 3> tta_views(const Raster<Pixel>& img);

struct MergeOptions {
  double iou_thr = 0.2;
  /// Only suppress candidates against boxes of the same class.
  bool class_aware = false;
};

/// Candidate boxes re-expressed in the frame of `target`. Throws
/// InvalidArgument when the two sets do not share a canonical frame.
std::vector<Detection> map_into(const DetectionSet& candidates, const RigidTransform& target);

/// Cross-view merge. The result starts as `real`; every candidate, mapped
/// into the frame of `real` and visited by decreasing confidence (ties by
/// larger x_min, then y_min), is appended iff its IoU with every kept box is
/// below `iou_thr`.
DetectionSet merge_tta(const DetectionSet& real, std::span<const DetectionSet> candidates,
                       const MergeOptions& opts = {});

/// Greedy class-wise suppression by decreasing confidence. A box is dropped
/// when its IoU with an already kept box of the same class exceeds `iou_thr`.
/// The output is ordered by rank.
std::vector<Detection> nms_standard(std::vector<Detection> dets, double iou_thr = 0.5);

}  // namespace pvinspect::fusion
