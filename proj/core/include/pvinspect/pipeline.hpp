#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pvinspect/detection_set.hpp"
#include "pvinspect/detector.hpp"
#include "pvinspect/imaging.hpp"

namespace pvinspect::pipeline {

enum class Spectrum { ir, vis };

/// How a defect is tested against a panel by the false alarm filter.
/// `containment` compares |d ∩ p| / |d|; `iou` compares the symmetric IoU.
enum class OverlapCriterion { containment, iou };

enum class Severity { normal, heated_cells, severe, extremely_severe };

struct SeverityTable {
  /// Lower bounds of HeatedCells, Severe and ExtremelySevere in degrees C.
  std::array<double, 3> breakpoints{10.0, 20.0, 30.0};
};

struct PipelineConfig {
  Spectrum spectrum = Spectrum::ir;
  double iou_thr_panel = 0.2;
  double iou_thr_defect = 0.5;
  OverlapCriterion criterion = OverlapCriterion::containment;

  /// Skew correction before panel detection (and before defect detection on VIS).
  bool rotate = true;
  imaging::CannyConfig canny{};
  imaging::HoughConfig hough{};

  /// Per-view suppression before the cross-view merge; 0 disables it.
  double view_nms_thr = 0.5;
  bool class_aware_merge = false;

  SeverityTable severity{};
  imaging::Calibration calibration{};
  /// Margin around every defect excluded from the healthy reference region.
  double healthy_margin = 2.0;

  std::string hotspot_label = "hotspot";
  std::string soiling_label = "strong_soiling";
};

/// Throws InvalidArgument on thresholds outside (0, 1), non-increasing
/// breakpoints or an invalid calibration.
void validate(const PipelineConfig& cfg);

struct PanelStage {
  /// Panels in the rotated frame; `panels.transform` maps the input onto it.
  DetectionSet panels;
  double rotation_deg = 0.0;
  bool featureless = false;
  /// Seconds spent on skew estimation and resampling.
  double rotation_s = 0.0;
  std::vector<std::string> warnings;
};

/// Skew correction, three-view inference and cross-view merge.
PanelStage run_panel_stage(const Image& img, const detector::DetectorHandle& det,
                           const PipelineConfig& cfg, const std::string& image_id = {});

/// Defect inference without TTA: on the input frame for IR, on the frame of
/// `rotation` for VIS.
DetectionSet run_defect_stage(const Image& img, const detector::DetectorHandle& det,
                              const PipelineConfig& cfg, const RigidTransform& rotation,
                              const std::string& image_id = {});

struct FilteredDefect {
  /// Box in the input frame.
  Detection detection;
  /// Index into the panel set of the best-overlapping panel.
  std::size_t panel = 0;
  double overlap = 0.0;
};

/// Overlap score of a defect with a panel under `criterion`.
double overlap_score(const BoundingBox& defect, const BoundingBox& panel, OverlapCriterion criterion);

/// Keeps a defect iff some panel scores at least `cfg.iou_thr_defect`
/// (inclusive). Defects are compared in the panel frame and returned in the
/// input frame, in their original order.
std::vector<FilteredDefect> false_alarm_filter(const DetectionSet& defects, const DetectionSet& panels,
                                               const PipelineConfig& cfg);

struct SeverityClass {
  Severity severity = Severity::normal;
  std::string_view name;
  std::string_view action;
};

/// Negative gradients classify as Normal.
SeverityClass classify_severity(double delta_t, const SeverityTable& table = {});
std::string_view severity_name(Severity s) noexcept;
std::string_view severity_action(Severity s) noexcept;

struct Gradient {
  double delta_t = 0.0;
  double t_defect = 0.0;
  double t_normal = 0.0;
  /// Set when the panel had no healthy pixels and the scene median was used.
  bool fallback = false;
};

/// Peak temperature inside `hotspot` minus the mean over `panel` with every
/// defect (the hotspot included) dilated by `margin` removed. A pixel belongs
/// to a box when its center does.
Gradient hotspot_gradient(const Gray16Image& img, const imaging::Calibration& cal,
                          const BoundingBox& hotspot, const BoundingBox& panel,
                          std::span<const BoundingBox> other_defects, double margin = 2.0);

/// |defect ∩ panel| / |panel|. Throws InvalidArgument for a zero-area panel.
double soiling_coverage(const BoundingBox& defect, const BoundingBox& panel);

struct SeverityReport {
  Detection detection;
  std::optional<std::size_t> panel_index;  ///< 1-based
  Gradient gradient;
  Severity severity = Severity::normal;
};

struct CoverageReport {
  std::size_t panel_index = 0;  ///< 1-based
  std::string defect_class;
  double coverage = 0.0;
};

struct StageTimings {
  double rotation_s = 0.0;
  double panel_s = 0.0;
  double defect_s = 0.0;
  double filter_s = 0.0;
};

struct ImageResult {
  std::string image_path;
  Spectrum spectrum = Spectrum::ir;
  FrameSize frame;
  double rotation_deg = 0.0;
  /// Panels sorted in raster order of their top-left corner (rotated frame).
  DetectionSet panels;
  std::vector<Detection> raw_defects;  ///< input frame
  std::vector<FilteredDefect> defects;
  std::vector<SeverityReport> hotspots;
  std::vector<CoverageReport> coverage;
  std::vector<std::string> warnings;
  StageTimings timings;
};

/// Full per-image run: panel stage, defect stage, filter, then severity (IR)
/// or soiling coverage (VIS).
ImageResult inspect_image(const Image& img, const detector::DetectorHandle& panel_detector,
                          const detector::DetectorHandle& defect_detector, const PipelineConfig& cfg,
                          const std::string& image_path);

/// Soiling coverage per panel, the union of all kept `label` defects on it.
/// Panels without coverage are omitted.
std::vector<CoverageReport> coverage_by_panel(const DetectionSet& panels,
                                              std::span<const FilteredDefect> defects,
                                              const std::string& label);

/// "Panel {i}: strong soiling covers {pct:.2f} % of the whole area"
std::string coverage_line(std::size_t panel_index, double coverage);

/// Report text: the image path, then one line per covered panel (VIS) or
/// per hotspot (IR).
std::string format_report(const ImageResult& result);
/// Same content as a JSON document.
std::string format_sidecar(const ImageResult& result);
/// Writes `<stem>.txt` and `<stem>.json` into `out_dir`.
void emit_report(const ImageResult& result, const std::filesystem::path& out_dir, const std::string& stem);

}  // namespace pvinspect::pipeline
