#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include "pvinspect/detection_set.hpp"
#include "pvinspect/imaging.hpp"
#include "pvinspect/raster.hpp"

namespace pvinspect::detector {

enum class DetectorKind { external, builtin_thermal };

/// Which side of the scene median a blob lies on.
enum class Polarity { above, below };

/// Deterministic blob detector. On radiometric input the values are
/// temperatures in degrees C; on 8-bit or color input they are luma levels.
/// Zero-valued pixels are treated as no-data (rotation padding) and ignored.
struct BuiltinConfig {
  double trigger = 10.0;
  int min_area = 4;
  Polarity polarity = Polarity::above;
  std::string label = "hotspot";

  /// Blobs whose bounding box is within `junction_tolerance` (relative) of
  /// this size are labeled "junction". Disabled while either side is 0.
  double junction_width = 0.0;
  double junction_height = 0.0;
  double junction_tolerance = 0.25;

  imaging::Calibration calibration{};
};

struct ExternalConfig {
  /// Shell command with {input} and {output} placeholders.
  std::string command;
  std::filesystem::path working_dir;
  std::chrono::milliseconds timeout{60'000};
};

struct DetectorHandle {
  DetectorKind kind = DetectorKind::builtin_thermal;
  ExternalConfig external;
  BuiltinConfig builtin;

  static DetectorHandle make_builtin(BuiltinConfig cfg);
  /// Timeout defaults to PVINSPECT_DETECTOR_TIMEOUT (seconds) when set, 60 s otherwise.
  static DetectorHandle make_external(std::string command, std::filesystem::path working_dir = {});
};

/// Throws InvalidArgument when the handle is unusable.
void validate(const DetectorHandle& handle);

/// Builtin detection on a radiometric frame: every 8-connected blob of pixels
/// warmer than the scene median by more than `cfg.trigger` degrees, with at
/// least `cfg.min_area` pixels, becomes one detection. Confidence is
/// min(1, (peak - median) / 50).
DetectionSet detect_thermal_baseline(const Gray16Image& img, const imaging::Calibration& cal,
                                     const BuiltinConfig& cfg, std::string image_id = {});

/// Same rule on any image kind (luma levels for 8-bit and color input).
DetectionSet detect_builtin(const Image& img, const BuiltinConfig& cfg, std::string image_id = {});

/// Runs the detector on one frame. The result is expressed in that frame
/// (identity transform) with boxes clipped to it. External failures (exit
/// status, timeout, malformed CSV) raise DetectorError with the captured
/// output.
DetectionSet detect(const DetectorHandle& handle, const Image& img, std::string image_id = {});

}  // namespace pvinspect::detector
