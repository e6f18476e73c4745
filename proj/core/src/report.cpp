#include <fmt/format.h>
#include <fstream>
#include <nlohmann/json.hpp>

#include "pvinspect/error.hpp"
#include "pvinspect/pipeline.hpp"

namespace pvinspect::pipeline {
namespace {

using nlohmann::ordered_json;

ordered_json box_json(const BoundingBox& b) { return {b.x_min, b.y_min, b.x_max, b.y_max}; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

std::string format_report(const ImageResult& result) {
  std::string out = result.image_path + "\n";
  if (result.spectrum == Spectrum::vis) {
    for (const auto& c : result.coverage) out += coverage_line(c.panel_index, c.coverage) + "\n";
    return out;
  }
  for (std::size_t i = 0; i < result.hotspots.size(); ++i) {
    const auto& h = result.hotspots[i];
    const std::string panel = h.panel_index ? fmt::format(" on panel {}", *h.panel_index) : "";
    out += fmt::format("Hotspot {}{}: delta T {:.2f} C, {}, action: {}\n", i + 1, panel,
                       h.gradient.delta_t, severity_name(h.severity), severity_action(h.severity));
  }
  return out;
}

std::string format_sidecar(const ImageResult& result) {
  ordered_json doc;
  doc["image"] = result.image_path;
  doc["spectrum"] = result.spectrum == Spectrum::ir ? "ir" : "vis";
  doc["frame"] = {result.frame.width, result.frame.height};
  doc["rotation_deg"] = result.rotation_deg;

  ordered_json panels = ordered_json::array();
  for (std::size_t i = 0; i < result.panels.detections.size(); ++i) {
    const auto& p = result.panels.detections[i];
    panels.push_back({{"index", i + 1}, {"class", p.class_label}, {"confidence", p.confidence},
                      {"box", box_json(p.box)}});
  }
  doc["panels"] = panels;

  ordered_json defects = ordered_json::array();
  for (const auto& d : result.defects) {
    defects.push_back({{"class", d.detection.class_label},
                       {"confidence", d.detection.confidence},
                       {"box", box_json(d.detection.box)},
                       {"panel", d.panel + 1},
                       {"overlap", d.overlap}});
  }
  doc["defects"] = defects;
  doc["discarded"] = result.raw_defects.size() - result.defects.size();

  if (result.spectrum == Spectrum::ir) {
    ordered_json hotspots = ordered_json::array();
    for (const auto& h : result.hotspots) {
      ordered_json j{{"box", box_json(h.detection.box)},
                     {"panel", h.panel_index ? ordered_json(*h.panel_index) : ordered_json(nullptr)},
                     {"t_defect", h.gradient.t_defect},
                     {"t_normal", h.gradient.t_normal},
                     {"delta_t", h.gradient.delta_t},
                     {"fallback", h.gradient.fallback},
                     {"severity", severity_name(h.severity)},
                     {"action", severity_action(h.severity)}};
      hotspots.push_back(std::move(j));
    }
    doc["hotspots"] = hotspots;
  } else {
    ordered_json coverage = ordered_json::array();
    for (const auto& c : result.coverage) {
      coverage.push_back({{"panel", c.panel_index},
                          {"class", c.defect_class},
                          {"coverage", c.coverage},
                          {"line", coverage_line(c.panel_index, c.coverage)}});
    }
    doc["coverage"] = coverage;
  }
  doc["warnings"] = result.warnings;
  return doc.dump(2) + "\n";
}

void emit_report(const ImageResult& result, const std::filesystem::path& out_dir, const std::string& stem) {
  std::filesystem::create_directories(out_dir);
  write_text(out_dir / (stem + ".txt"), format_report(result));
  write_text(out_dir / (stem + ".json"), format_sidecar(result));
}

}  // namespace pvinspect::pipeline
