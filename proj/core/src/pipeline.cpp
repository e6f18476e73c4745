#include "pvinspect/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>

#include "pvinspect/error.hpp"
#include "pvinspect/fusion.hpp"

namespace pvinspect::pipeline {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Image warp_any(const Image& img, const RigidTransform& t) {
  return std::visit([&](const auto& r) -> Image { return imaging::warp(r, t); }, img);
}

template <typename Pixel>
DetectionSet detect_views(const Raster<Pixel>& img, const detector::DetectorHandle& det,
                          const PipelineConfig& cfg, const std::string& image_id) {
  auto views = fusion::tta_views(img);
  std::vector<DetectionSet> sets;
  for (auto& v : views) {
    DetectionSet s = detector::detect(det, Image{std::move(v.image)}, image_id + ":" + v.name);
    s.transform = v.transform;
    if (cfg.view_nms_thr > 0.0) s.detections = fusion::nms_standard(std::move(s.detections), cfg.view_nms_thr);
    sets.push_back(std::move(s));
  }
  fusion::MergeOptions opts{cfg.iou_thr_panel, cfg.class_aware_merge};
  DetectionSet merged = fusion::merge_tta(sets[0], std::span(sets).subspan(1), opts);
  merged.image_id = image_id;
  return merged;
}

// Inclusive-exclusive pixel index range whose centers fall inside [lo, hi).
std::pair<int, int> pixel_span(double lo, double hi, int limit) {
  const int a = std::clamp(static_cast<int>(std::ceil(lo - 0.5)), 0, limit);
  const int b = std::clamp(static_cast<int>(std::ceil(hi - 0.5)), 0, limit);
  return {a, std::max(a, b)};
}

bool center_inside(int x, int y, const BoundingBox& b) {
  const double cx = x + 0.5;
  const double cy = y + 0.5;
  return cx >= b.x_min && cx < b.x_max && cy >= b.y_min && cy < b.y_max;
}

}  // namespace

void validate(const PipelineConfig& cfg) {
  for (double t : {cfg.iou_thr_panel, cfg.iou_thr_defect}) {
    if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("IoU thresholds must lie in (0, 1)");
  }
  if (cfg.view_nms_thr < 0.0 || cfg.view_nms_thr > 1.0) {
    throw InvalidArgument("view NMS threshold must lie in [0, 1]");
  }
  const auto& b = cfg.severity.breakpoints;
  if (!(b[0] > 0.0 && b[0] < b[1] && b[1] < b[2]) || !std::isfinite(b[2])) {
    throw InvalidArgument("severity breakpoints must be positive and strictly increasing");
  }
  if (!(cfg.healthy_margin >= 0.0)) throw InvalidArgument("healthy margin must be non-negative");
  imaging::validate(cfg.calibration);
  imaging::validate(cfg.canny);
}

PanelStage run_panel_stage(const Image& img, const detector::DetectorHandle& det,
                           const PipelineConfig& cfg, const std::string& image_id) {
  validate(cfg);
  PanelStage out;
  const auto t0 = Clock::now();
  if (cfg.rotate) {
    const auto skew = imaging::estimate_skew(imaging::to_gray8(img), cfg.canny, cfg.hough);
    out.featureless = skew.featureless;
    out.rotation_deg = skew.correction_deg;
    if (skew.featureless) out.warnings.push_back("featureless image: rotation skipped");
  }
  const RigidTransform rotation = RigidTransform::rotation(out.rotation_deg, frame_of(img));
  const Image rotated = rotation.is_identity() ? img : warp_any(img, rotation);
  out.rotation_s = seconds_since(t0);

  out.panels = std::visit([&](const auto& r) { return detect_views(r, det, cfg, image_id); }, rotated);
  out.panels.transform = rotation;
  return out;
}

DetectionSet run_defect_stage(const Image& img, const detector::DetectorHandle& det,
                              const PipelineConfig& cfg, const RigidTransform& rotation,
                              const std::string& image_id) {
  if (cfg.spectrum == Spectrum::ir || rotation.is_identity()) {
    return detector::detect(det, img, image_id);
  }
  DetectionSet out = detector::detect(det, warp_any(img, rotation), image_id);
  out.transform = rotation;
  return out;
}

double overlap_score(const BoundingBox& defect, const BoundingBox& panel, OverlapCriterion criterion) {
  return criterion == OverlapCriterion::containment ? coverage_of(defect, panel) : iou(defect, panel);
}

std::vector<FilteredDefect> false_alarm_filter(const DetectionSet& defects, const DetectionSet& panels,
                                               const PipelineConfig& cfg) {
  if (defects.transform.source() != panels.transform.source()) {
    throw InvalidArgument("defects and panels do not share an input frame");
  }
  const std::vector<Detection> canonical = to_canonical(defects);
  std::vector<FilteredDefect> kept;
  for (const auto& d : canonical) {
    const BoundingBox in_panel_frame = transform_box(d.box, panels.transform);
    double best = -1.0;
    std::size_t best_panel = 0;
    for (std::size_t i = 0; i < panels.detections.size(); ++i) {
      const double s = overlap_score(in_panel_frame, panels.detections[i].box, cfg.criterion);
      if (s > best) {
        best = s;
        best_panel = i;
      }
    }
    if (best >= cfg.iou_thr_defect) kept.push_back({d, best_panel, best});
  }
  return kept;
}

std::string_view severity_name(Severity s) noexcept {
  switch (s) {
    case Severity::normal: return "Normal";
    case Severity::heated_cells: return "Heated Cell(s)";
    case Severity::severe: return "Severe hotspot";
    case Severity::extremely_severe: return "Extremely Severe hotspot";
  }
  return "";
}

std::string_view severity_action(Severity s) noexcept {
  switch (s) {
    case Severity::normal: return "None";
    case Severity::heated_cells: return "Careful check in regular thermographic inspections";
    case Severity::severe: return "Replacement of the defective module";
    case Severity::extremely_severe: return "Immediate replacement of the defective module";
  }
  return "";
}

SeverityClass classify_severity(double delta_t, const SeverityTable& table) {
  if (std::isnan(delta_t)) throw InvalidArgument("temperature gradient is not a number");
  Severity s = Severity::normal;
  if (delta_t >= table.breakpoints[2]) {
    s = Severity::extremely_severe;
  } else if (delta_t >= table.breakpoints[1]) {
    s = Severity::severe;
  } else if (delta_t >= table.breakpoints[0]) {
    s = Severity::heated_cells;
  }
  return {s, severity_name(s), severity_action(s)};
}

Gradient hotspot_gradient(const Gray16Image& img, const imaging::Calibration& cal,
                          const BoundingBox& hotspot, const BoundingBox& panel,
                          std::span<const BoundingBox> other_defects, double margin) {
  imaging::validate(cal);
  auto temp = [&](int x, int y) { return cal.gain * img(x, y) + cal.offset; };
  Gradient g;
  const auto [hx0, hx1] = pixel_span(hotspot.x_min, hotspot.x_max, img.width());
  const auto [hy0, hy1] = pixel_span(hotspot.y_min, hotspot.y_max, img.height());
  if (hx0 == hx1 || hy0 == hy1) throw InvalidArgument("hotspot box contains no pixels");
  g.t_defect = -INFINITY;
  for (int y = hy0; y < hy1; ++y) {
    for (int x = hx0; x < hx1; ++x) g.t_defect = std::max(g.t_defect, temp(x, y));
  }

  std::vector<BoundingBox> defects{hotspot};
  defects.insert(defects.end(), other_defects.begin(), other_defects.end());
  std::vector<BoundingBox> excluded;
  for (const auto& d : defects) excluded.push_back(dilate(d, margin));

  double sum = 0.0;
  long count = 0;
  const auto [px0, px1] = pixel_span(panel.x_min, panel.x_max, img.width());
  const auto [py0, py1] = pixel_span(panel.y_min, panel.y_max, img.height());
  for (int y = py0; y < py1; ++y) {
    for (int x = px0; x < px1; ++x) {
      if (std::any_of(excluded.begin(), excluded.end(), [&](const auto& b) { return center_inside(x, y, b); })) continue;
      sum += temp(x, y);
      ++count;
    }
  }
  if (count > 0) {
    g.t_normal = sum / static_cast<double>(count);
  } else {
    g.fallback = true;
    std::vector<double> outside;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        if (std::any_of(defects.begin(), defects.end(), [&](const auto& b) { return center_inside(x, y, b); })) continue;
        outside.push_back(temp(x, y));
      }
    }
    if (outside.empty()) throw InvalidArgument("no healthy pixels outside the defects");
    const auto mid = outside.begin() + static_cast<std::ptrdiff_t>(outside.size() / 2);
    std::nth_element(outside.begin(), mid, outside.end());
    g.t_normal = *mid;
    if (outside.size() % 2 == 0) g.t_normal = 0.5 * (g.t_normal + *std::max_element(outside.begin(), mid));
  }
  g.delta_t = g.t_defect - g.t_normal;
  return g;
}

double soiling_coverage(const BoundingBox& defect, const BoundingBox& panel) {
  if (!(panel.area() > 0.0)) throw InvalidArgument("panel box has zero area");
  return std::clamp(intersection_area(defect, panel) / panel.area(), 0.0, 1.0);
}

std::vector<CoverageReport> coverage_by_panel(const DetectionSet& panels,
                                              std::span<const FilteredDefect> defects,
                                              const std::string& label) {
  std::vector<CoverageReport> out;
  for (std::size_t i = 0; i < panels.detections.size(); ++i) {
    const BoundingBox& p = panels.detections[i].box;
    if (!(p.area() > 0.0)) continue;
    std::vector<BoundingBox> parts;
    for (const auto& d : defects) {
      if (d.panel != i || d.detection.class_label != label) continue;
      const BoundingBox part = intersection(transform_box(d.detection.box, panels.transform), p);
      if (part.area() > 0.0) parts.push_back(part);
    }
    if (parts.empty()) continue;
    out.push_back({i + 1, label, std::clamp(union_area(parts) / p.area(), 0.0, 1.0)});
  }
  return out;
}

std::string coverage_line(std::size_t panel_index, double coverage) {
  return fmt::format("Panel {}: strong soiling covers {:.2f} % of the whole area", panel_index,
                     coverage * 100.0);
}

ImageResult inspect_image(const Image& img, const detector::DetectorHandle& panel_detector,
                          const detector::DetectorHandle& defect_detector, const PipelineConfig& cfg,
                          const std::string& image_path) {
  validate(cfg);
  ImageResult r;
  r.image_path = image_path;
  r.spectrum = cfg.spectrum;
  r.frame = frame_of(img);

  auto t0 = Clock::now();
  PanelStage ps = run_panel_stage(img, panel_detector, cfg, image_path);
  const double panel_total = seconds_since(t0);
  r.timings.rotation_s = ps.rotation_s;
  r.timings.panel_s = std::max(0.0, panel_total - ps.rotation_s);
  r.rotation_deg = ps.rotation_deg;
  r.warnings = std::move(ps.warnings);
  r.panels = std::move(ps.panels);
  std::stable_sort(r.panels.detections.begin(), r.panels.detections.end(),
                   [](const Detection& a, const Detection& b) {
                     if (a.box.y_min != b.box.y_min) return a.box.y_min < b.box.y_min;
                     return a.box.x_min < b.box.x_min;
                   });

  t0 = Clock::now();
  const DetectionSet defects = run_defect_stage(img, defect_detector, cfg, r.panels.transform, image_path);
  r.timings.defect_s = seconds_since(t0);
  r.raw_defects = to_canonical(defects);

  t0 = Clock::now();
  r.defects = false_alarm_filter(defects, r.panels, cfg);
  r.timings.filter_s = seconds_since(t0);

  if (cfg.spectrum == Spectrum::ir) {
    const auto* raw = std::get_if<Gray16Image>(&img);
    const RigidTransform back = invert(r.panels.transform);
    for (std::size_t i = 0; i < r.defects.size(); ++i) {
      const auto& d = r.defects[i];
      if (d.detection.class_label != cfg.hotspot_label) continue;
      if (!raw) {
        r.warnings.push_back("no radiometric data: severity of hotspots not computed");
        break;
      }
      std::vector<BoundingBox> others;
      for (std::size_t j = 0; j < r.defects.size(); ++j) {
        if (j != i) others.push_back(r.defects[j].detection.box);
      }
      const BoundingBox panel = transform_box(r.panels.detections[d.panel].box, back);
      SeverityReport rep;
      rep.detection = d.detection;
      rep.panel_index = d.panel + 1;
      rep.gradient = hotspot_gradient(*raw, cfg.calibration, d.detection.box, panel, others, cfg.healthy_margin);
      if (rep.gradient.fallback) {
        r.warnings.push_back(fmt::format("hotspot {}: no healthy panel pixels, scene median used",
                                         r.hotspots.size() + 1));
      }
      if (rep.gradient.delta_t < 0.0) {
        r.warnings.push_back(fmt::format("hotspot {}: negative gradient {:.2f} treated as 0",
                                         r.hotspots.size() + 1, rep.gradient.delta_t));
      }
      rep.severity = classify_severity(std::max(0.0, rep.gradient.delta_t), cfg.severity).severity;
      r.hotspots.push_back(std::move(rep));
    }
  } else {
    r.coverage = coverage_by_panel(r.panels, r.defects, cfg.soiling_label);
  }
  return r;
}

}  // namespace pvinspect::pipeline
