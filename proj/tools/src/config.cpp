#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace pvinspect::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a number", key);
  }
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not an integer", key);
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean", key);
}

std::string num(double v) { return fmt::format("{}", v); }

struct Field {
  std::string key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

void add_builtin_fields(std::vector<Field>& f, const std::string& prefix, detector::BuiltinConfig& c) {
  f.push_back({prefix + ".trigger", [&c, k = prefix + ".trigger"](const std::string& v) { c.trigger = to_double(k, v); },
               [&c] { return num(c.trigger); }});
  f.push_back({prefix + ".min_area",
               [&c, k = prefix + ".min_area"](const std::string& v) { c.min_area = static_cast<int>(to_int(k, v)); },
               [&c] { return std::to_string(c.min_area); }});
  f.push_back({prefix + ".polarity",
               [&c, k = prefix + ".polarity"](const std::string& v) {
                 if (v == "above") {
                   c.polarity = detector::Polarity::above;
                 } else if (v == "below") {
                   c.polarity = detector::Polarity::below;
                 } else {
                   throw ConfigError("config key '" + k + "' must be above or below", k);
                 }
               },
               [&c] { return std::string(c.polarity == detector::Polarity::above ? "above" : "below"); }});
  f.push_back({prefix + ".label", [&c](const std::string& v) { c.label = v; }, [&c] { return c.label; }});
  f.push_back({prefix + ".junction_width",
               [&c, k = prefix + ".junction_width"](const std::string& v) { c.junction_width = to_double(k, v); },
               [&c] { return num(c.junction_width); }});
  f.push_back({prefix + ".junction_height",
               [&c, k = prefix + ".junction_height"](const std::string& v) { c.junction_height = to_double(k, v); },
               [&c] { return num(c.junction_height); }});
  f.push_back({prefix + ".junction_tolerance",
               [&c, k = prefix + ".junction_tolerance"](const std::string& v) { c.junction_tolerance = to_double(k, v); },
               [&c] { return num(c.junction_tolerance); }});
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("config line {}: expected key = value", n), "");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError(fmt::format("config line {}: empty key", n), "");
    if (out.count(key)) throw ConfigError("config key '" + key + "' given twice", key);
    out[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

RunConfig make_run_config(const std::map<std::string, std::string>& values, pipeline::Spectrum spectrum) {
  RunConfig rc;
  auto& p = rc.pipeline;
  p.spectrum = spectrum;
  rc.panel_detector.label = "panel";
  rc.panel_detector.trigger = 4.0;
  rc.panel_detector.min_area = 400;
  rc.defect_detector.label = "hotspot";

  std::vector<Field> f;
  f.push_back({"iou_thr_panel", [&](const std::string& v) { p.iou_thr_panel = to_double("iou_thr_panel", v); },
               [&] { return num(p.iou_thr_panel); }});
  f.push_back({"iou_thr_defect", [&](const std::string& v) { p.iou_thr_defect = to_double("iou_thr_defect", v); },
               [&] { return num(p.iou_thr_defect); }});
  f.push_back({"overlap",
               [&](const std::string& v) {
                 if (v == "containment") {
                   p.criterion = pipeline::OverlapCriterion::containment;
                 } else if (v == "iou") {
                   p.criterion = pipeline::OverlapCriterion::iou;
                 } else {
                   throw ConfigError("config key 'overlap' must be containment or iou", "overlap");
                 }
               },
               [&] { return std::string(p.criterion == pipeline::OverlapCriterion::iou ? "iou" : "containment"); }});
  f.push_back({"rotate", [&](const std::string& v) { p.rotate = to_bool("rotate", v); },
               [&] { return std::string(p.rotate ? "true" : "false"); }});
  f.push_back({"view_nms_thr", [&](const std::string& v) { p.view_nms_thr = to_double("view_nms_thr", v); },
               [&] { return num(p.view_nms_thr); }});
  f.push_back({"class_aware_merge", [&](const std::string& v) { p.class_aware_merge = to_bool("class_aware_merge", v); },
               [&] { return std::string(p.class_aware_merge ? "true" : "false"); }});
  f.push_back({"severity.breakpoints",
               [&](const std::string& v) {
                 std::vector<double> b;
                 std::size_t start = 0;
                 while (true) {
                   const auto comma = v.find(',', start);
                   b.push_back(to_double("severity.breakpoints", trim(v.substr(start, comma - start))));
                   if (comma == std::string::npos) break;
                   start = comma + 1;
                 }
                 if (b.size() != 3) {
                   throw ConfigError("config key 'severity.breakpoints' needs three values", "severity.breakpoints");
                 }
                 p.severity.breakpoints = {b[0], b[1], b[2]};
               },
               [&] {
                 const auto& b = p.severity.breakpoints;
                 return fmt::format("{},{},{}", b[0], b[1], b[2]);
               }});
  f.push_back({"calibration.gain", [&](const std::string& v) { p.calibration.gain = to_double("calibration.gain", v); },
               [&] { return num(p.calibration.gain); }});
  f.push_back({"calibration.offset",
               [&](const std::string& v) { p.calibration.offset = to_double("calibration.offset", v); },
               [&] { return num(p.calibration.offset); }});
  f.push_back({"healthy_margin", [&](const std::string& v) { p.healthy_margin = to_double("healthy_margin", v); },
               [&] { return num(p.healthy_margin); }});
  f.push_back({"hotspot_label", [&](const std::string& v) { p.hotspot_label = v; }, [&] { return p.hotspot_label; }});
  f.push_back({"soiling_label", [&](const std::string& v) { p.soiling_label = v; }, [&] { return p.soiling_label; }});
  f.push_back({"canny.g_min", [&](const std::string& v) { p.canny.g_min = to_double("canny.g_min", v); },
               [&] { return num(p.canny.g_min); }});
  f.push_back({"canny.g_max", [&](const std::string& v) { p.canny.g_max = to_double("canny.g_max", v); },
               [&] { return num(p.canny.g_max); }});
  f.push_back({"canny.step", [&](const std::string& v) { p.canny.step = to_double("canny.step", v); },
               [&] { return num(p.canny.step); }});
  f.push_back({"canny.n_thr",
               [&](const std::string& v) { p.canny.n_thr = static_cast<std::size_t>(to_int("canny.n_thr", v)); },
               [&] { return std::to_string(p.canny.n_thr); }});
  f.push_back({"canny.floor", [&](const std::string& v) { p.canny.floor = to_double("canny.floor", v); },
               [&] { return num(p.canny.floor); }});
  f.push_back({"hough.min_votes", [&](const std::string& v) { p.hough.min_votes = to_double("hough.min_votes", v); },
               [&] { return num(p.hough.min_votes); }});
  f.push_back({"hough.decay", [&](const std::string& v) { p.hough.decay = to_double("hough.decay", v); },
               [&] { return num(p.hough.decay); }});
  add_builtin_fields(f, "panel", rc.panel_detector);
  add_builtin_fields(f, "defect", rc.defect_detector);
  f.push_back({"detector.timeout",
               [&](const std::string& v) { rc.detector_timeout_s = to_double("detector.timeout", v); },
               [&] { return rc.detector_timeout_s ? num(*rc.detector_timeout_s) : std::string("default"); }});
  f.push_back({"palette", [&](const std::string& v) { rc.palette = v; }, [&] { return rc.palette.string(); }});
  f.push_back({"seed",
               [&](const std::string& v) { rc.seed = static_cast<std::uint64_t>(to_int("seed", v)); },
               [&] { return std::to_string(rc.seed); }});

  if (spectrum == pipeline::Spectrum::ir) {
    for (const char* key : {"calibration.gain", "calibration.offset"}) {
      if (!values.count(key)) throw ConfigError(std::string("missing config key '") + key + "'", key);
    }
  }
  for (const auto& [key, value] : values) {
    const auto it = std::find_if(f.begin(), f.end(), [&](const Field& x) { return x.key == key; });
    if (it == f.end()) throw ConfigError("unknown config key '" + key + "'", key);
    it->set(value);
  }
  rc.panel_detector.calibration = p.calibration;
  rc.defect_detector.calibration = p.calibration;

  try {
    pipeline::validate(p);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what(), "");
  }
  if (rc.detector_timeout_s && !(*rc.detector_timeout_s > 0.0)) {
    throw ConfigError("config key 'detector.timeout' must be positive", "detector.timeout");
  }
  for (const auto& x : f) rc.snapshot[x.key] = x.get();
  rc.snapshot["spectrum"] = spectrum == pipeline::Spectrum::ir ? "ir" : "vis";
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path, pipeline::Spectrum spectrum) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), "");
  std::ostringstream ss;
  ss << in.rdbuf();
  return make_run_config(parse_key_values(ss.str()), spectrum);
}

}  // namespace pvinspect::cli
