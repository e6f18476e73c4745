#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pvinspect/box.hpp"
#include "pvinspect/detection_set.hpp"
#include "pvinspect/raster.hpp"

namespace pvinspect::dataset {

// ---------------------------------------------------------------------------
// PASCAL-VOC annotations

struct AnnotatedImage {
  std::filesystem::path image_path;
  FrameSize size;
  std::vector<Annotation> annotations;

  friend bool operator==(const AnnotatedImage&, const AnnotatedImage&) = default;
};

/// Parses a VOC annotation document. Boxes are clipped to the image frame.
/// Throws ParseError (with the line when known) on malformed XML, missing
/// fields, inverted corners or boxes that vanish after clipping.
AnnotatedImage parse_annotations(std::string_view xml, const std::string& source_name = "<memory>");
AnnotatedImage load_annotations(const std::filesystem::path& xml_path);

/// VOC document with coordinates written to 6 decimals.
std::string format_annotations(const AnnotatedImage& image);
void write_annotations(const AnnotatedImage& image, const std::filesystem::path& xml_path);

// ---------------------------------------------------------------------------
// Detection CSV: class_label,confidence,x_min,y_min,x_max,y_max with no
// header, '.' decimal point and 6 decimals.

std::string format_detections_csv(std::span<const Detection> detections);
void write_detections_csv(std::span<const Detection> detections, const std::filesystem::path& path);

/// Throws ParseError carrying the row number for malformed rows and
/// confidences outside [0, 1].
std::vector<Detection> parse_detections_csv(std::string_view text);
std::vector<Detection> read_detections_csv(const std::filesystem::path& path);

/// CSV contents as a set in the canonical frame of an image of `frame` size.
DetectionSet read_detection_set(const std::filesystem::path& path, FrameSize frame,
                                std::string image_id);

// ---------------------------------------------------------------------------
// Stratified split

struct SplitRatios {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
};

struct DatasetSplit {
  /// Indices into the input list.
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  SplitRatios ratios;
  /// Achieved share of each class's instances per split (train, val, test).
  std::map<std::string, std::array<double, 3>> class_fractions;
};

/// Image-level greedy assignment: images are visited largest first (seeded
/// shuffle breaks ties) and each goes to the split whose per-class instance
/// counts move closest to the targets. With `strict`, classes present in
/// fewer than 3 images are rejected.
DatasetSplit stratified_split(std::span<const AnnotatedImage> images, const SplitRatios& ratios,
                              std::uint64_t seed, bool strict = false);

// ---------------------------------------------------------------------------
// Geometric augmentation

enum class RotationMode { right_angles, range };

struct AugmentationSpec {
  bool rotation = false;
  RotationMode rotation_mode = RotationMode::right_angles;
  std::vector<int> right_angles{90, 180, 270};
  double rotation_min_deg = -10.0;
  double rotation_max_deg = 10.0;

  bool horizontal_flip = false;
  bool vertical_flip = false;

  bool cropping = false;
  double crop_min_fraction = 0.6;
  double crop_max_fraction = 0.9;
  int crop_attempts = 10;

  bool scaling = false;
  double scale_min = 0.5;
  double scale_max = 1.5;

  std::uint64_t seed = 0;

  /// Defect detector on IR: every transform.
  static AugmentationSpec defect_ir();
  /// Defect detector on visible imagery: no rotation (inputs are pre-rotated).
  static AugmentationSpec defect_vis();
  /// Panel detector: flips only.
  static AugmentationSpec panel();
};

/// Throws InvalidArgument when an enabled transform has an empty range.
void validate(const AugmentationSpec& spec);

template <typename Pixel>
struct AugmentedSample {
  Raster<Pixel> image;
  AnnotatedImage annotations;
  std::string transform;
};

/// Sample under a rigid transform (flip or rotation) of its frame; boxes
/// that collapse are dropped.
template <typename Pixel>
AugmentedSample<Pixel> apply_rigid(const Raster<Pixel>& image, const AnnotatedImage& meta,
                                   const RigidTransform& t, std::string name);

/// Crop to a window; std::nullopt when no box keeps a positive area.
template <typename Pixel>
std::optional<AugmentedSample<Pixel>> apply_crop(const Raster<Pixel>& image,
                                                 const AnnotatedImage& meta, int x0, int y0,
                                                 int width, int height);

template <typename Pixel>
AugmentedSample<Pixel> apply_scale(const Raster<Pixel>& image, const AnnotatedImage& meta,
                                   double factor);

/// One output per enabled transform, parameters drawn from `spec.seed`.
/// A crop that keeps no box is redrawn up to `crop_attempts` times and
/// omitted if all attempts fail.
template <typename Pixel>
std::vector<AugmentedSample<Pixel>> augment(const Raster<Pixel>& image, const AnnotatedImage& meta,
                                            const AugmentationSpec& spec);

}  // namespace pvinspect::dataset
