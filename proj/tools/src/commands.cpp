#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fmt/format.h>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "config.hpp"
#include "pvinspect/anchors.hpp"
#include "pvinspect/dataset.hpp"
#include "pvinspect/error.hpp"
#include "pvinspect/image_io.hpp"
#include "pvinspect/imaging.hpp"
#include "pvinspect/metrics.hpp"
#include "pvinspect/pipeline.hpp"
#include "worker_pool.hpp"

namespace pvinspect::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

/// Usage problem detected after argument parsing (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  static const std::set<std::string> known{".png", ".jpg", ".jpeg", ".tif", ".tiff", ".bmp"};
  return known.count(ext) > 0;
}

std::vector<fs::path> list_files(const fs::path& where, bool (*accept)(const fs::path&)) {
  if (fs::is_regular_file(where)) return {where};
  if (!fs::is_directory(where)) throw UsageError("no such file or directory: " + where.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(where)) {
    if (e.is_regular_file() && accept(e.path())) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_xml(const fs::path& p) { return p.extension() == ".xml"; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(what + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw UsageError(what + " is empty");
  return out;
}

ordered_json transform_json(const RigidTransform& t) {
  return {{"angle_deg", t.angle_deg()},
          {"flip_h", t.flip_h()},
          {"flip_v", t.flip_v()},
          {"source", {t.source().width, t.source().height}},
          {"destination", {t.destination().width, t.destination().height}}};
}

Image rotate_any(const Image& img, double angle) {
  return std::visit([&](const auto& r) -> Image { return imaging::rotate_image(r, angle).image; }, img);
}

// ---------------------------------------------------------------------------
// rotate

struct RotateArgs {
  std::string images;
  std::string out;
  unsigned jobs = 1;
};

int cmd_rotate(const RotateArgs& a, std::ostream& out, std::ostream& err) {
  const auto files = list_files(a.images, is_image);
  fs::create_directories(a.out);
  struct Outcome {
    std::string line;
    std::string warning;
    std::string error;
  };
  std::vector<Outcome> outcomes(files.size());
  parallel_for(files.size(), a.jobs, [&](std::size_t i) {
    Outcome& o = outcomes[i];
    try {
      const Image img = io::read_image(files[i]);
      const auto skew = imaging::estimate_skew(imaging::to_gray8(img));
      const RigidTransform t = RigidTransform::rotation(skew.correction_deg, frame_of(img));
      const Image rotated = t.is_identity() ? img : rotate_any(img, skew.correction_deg);
      io::write_image(fs::path(a.out) / files[i].filename(), rotated);
      ordered_json side = transform_json(t);
      side["featureless"] = skew.featureless;
      side["canny_iterations"] = skew.canny.iterations;
      side["hough_votes"] = skew.hough.votes;
      write_text(fs::path(a.out) / (files[i].stem().string() + ".transform.json"), side.dump(2) + "\n");
      if (skew.featureless) o.warning = files[i].filename().string() + ": featureless image, copied unrotated";
      o.line = fmt::format("{}: rotated by {:.2f} deg", files[i].filename().string(), skew.correction_deg);
    } catch (const std::exception& e) {
      o.error = files[i].string() + ": " + e.what();
    }
  });
  int code = kOk;
  for (const auto& o : outcomes) {
    if (!o.line.empty()) out << o.line << "\n";
    if (!o.warning.empty()) err << "warning: " << o.warning << "\n";
    if (!o.error.empty()) {
      err << "error: " << o.error << "\n";
      code = kProcessingError;
    }
  }
  return code;
}

// ---------------------------------------------------------------------------
// inspect

struct InspectArgs {
  std::string spectrum = "ir";
  std::string images;
  std::string panel_detector = "builtin";
  std::string defect_detector = "builtin";
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  bool overlay = false;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
};

detector::DetectorHandle make_detector(const std::string& spec, const detector::BuiltinConfig& builtin,
                                       const RunConfig& rc) {
  if (spec == "builtin") return detector::DetectorHandle::make_builtin(builtin);
  auto h = detector::DetectorHandle::make_external(spec);
  if (rc.detector_timeout_s) {
    h.external.timeout = std::chrono::milliseconds(static_cast<long long>(*rc.detector_timeout_s * 1000.0));
  }
  try {
    detector::validate(h);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return h;
}

void draw_box(RgbImage& img, const BoundingBox& b, Rgb8 color) {
  const int x0 = std::clamp(static_cast<int>(std::floor(b.x_min)), 0, img.width() - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor(b.y_min)), 0, img.height() - 1);
  const int x1 = std::clamp(static_cast<int>(std::ceil(b.x_max)) - 1, 0, img.width() - 1);
  const int y1 = std::clamp(static_cast<int>(std::ceil(b.y_max)) - 1, 0, img.height() - 1);
  for (int x = x0; x <= x1; ++x) img(x, y0) = img(x, y1) = color;
  for (int y = y0; y <= y1; ++y) img(x0, y) = img(x1, y) = color;
}

RgbImage overlay_image(const Image& img, const pipeline::ImageResult& r, const imaging::Palette& palette) {
  RgbImage canvas = std::holds_alternative<RgbImage>(img)
                        ? std::get<RgbImage>(img)
                        : imaging::false_color(imaging::to_gray8(img), palette);
  if (std::holds_alternative<Gray8Image>(img)) {
    const auto& g = std::get<Gray8Image>(img);
    for (int y = 0; y < g.height(); ++y) {
      for (int x = 0; x < g.width(); ++x) canvas(x, y) = {g(x, y), g(x, y), g(x, y)};
    }
  }
  for (const auto& p : to_canonical(r.panels)) draw_box(canvas, p.box, {0, 255, 0});
  for (const auto& d : r.raw_defects) draw_box(canvas, d.box, {255, 0, 0});
  for (const auto& d : r.defects) draw_box(canvas, d.detection.box, {0, 0, 255});
  return canvas;
}

int cmd_inspect(const InspectArgs& a, std::ostream& out, std::ostream& err) {
  pipeline::Spectrum spectrum;
  if (a.spectrum == "ir") {
    spectrum = pipeline::Spectrum::ir;
  } else if (a.spectrum == "vis") {
    spectrum = pipeline::Spectrum::vis;
  } else {
    throw UsageError("--spectrum must be ir or vis");
  }
  std::map<std::string, std::string> values;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw ConfigError("cannot open config file " + a.config, "");
    std::ostringstream ss;
    ss << in.rdbuf();
    values = parse_key_values(ss.str());
  }
  for (const auto& o : a.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + o + "'");
    values[o.substr(0, eq)] = o.substr(eq + 1);
  }
  if (a.seed) values["seed"] = std::to_string(*a.seed);
  const RunConfig rc = make_run_config(values, spectrum);
  const auto panel_det = make_detector(a.panel_detector, rc.panel_detector, rc);
  const auto defect_det = make_detector(a.defect_detector, rc.defect_detector, rc);
  const imaging::Palette palette = rc.palette.empty() ? imaging::rainbow_palette() : imaging::load_palette_csv(rc.palette);

  const auto files = list_files(a.images, is_image);
  const fs::path out_dir = a.out;
  fs::create_directories(out_dir);

  struct Outcome {
    std::optional<pipeline::ImageResult> result;
    std::vector<std::string> outputs;
    std::string error;
  };
  std::vector<Outcome> outcomes(files.size());
  parallel_for(files.size(), a.jobs, [&](std::size_t i) {
    Outcome& o = outcomes[i];
    try {
      const Image img = io::read_image(files[i]);
      auto r = pipeline::inspect_image(img, panel_det, defect_det, rc.pipeline, files[i].string());
      const std::string stem = files[i].stem().string();
      std::vector<Detection> kept;
      for (const auto& d : r.defects) kept.push_back(d.detection);
      dataset::write_detections_csv(kept, out_dir / (stem + ".csv"));
      pipeline::emit_report(r, out_dir, stem);
      o.outputs = {stem + ".csv", stem + ".txt", stem + ".json"};
      if (a.overlay) {
        io::write_image(out_dir / (stem + "_overlay.png"), overlay_image(img, r, palette));
        o.outputs.push_back(stem + "_overlay.png");
      }
      o.result = std::move(r);
    } catch (const std::exception& e) {
      o.error = e.what();
      if (const auto* de = dynamic_cast<const DetectorError*>(&e); de && !de->diagnostics().empty()) {
        o.error += "\n" + de->diagnostics();
      }
    }
  });

  ordered_json manifest;
  manifest["tool"] = "pvinspect";
  manifest["version"] = kVersion;
  manifest["command"] = "inspect";
  manifest["config"] = rc.snapshot;
  manifest["panel_detector"] = a.panel_detector;
  manifest["defect_detector"] = a.defect_detector;
  ordered_json inputs = ordered_json::array();
  for (const auto& f : files) inputs.push_back(f.string());
  manifest["inputs"] = inputs;

  ordered_json images = ordered_json::array();
  pipeline::StageTimings sum;
  std::size_t done = 0;
  int code = kOk;
  ordered_json all_warnings = ordered_json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    const Outcome& o = outcomes[i];
    ordered_json entry;
    entry["image"] = files[i].string();
    if (o.result) {
      const auto& t = o.result->timings;
      entry["status"] = "ok";
      entry["rotation_deg"] = o.result->rotation_deg;
      entry["panels"] = o.result->panels.detections.size();
      entry["raw_defects"] = o.result->raw_defects.size();
      entry["kept_defects"] = o.result->defects.size();
      entry["timings_s"] = {{"rotation", t.rotation_s}, {"panel", t.panel_s}, {"defect", t.defect_s},
                            {"filter", t.filter_s}};
      entry["outputs"] = o.outputs;
      entry["warnings"] = o.result->warnings;
      for (const auto& w : o.result->warnings) {
        all_warnings.push_back(files[i].filename().string() + ": " + w);
        err << "warning: " << files[i].filename().string() << ": " << w << "\n";
      }
      sum.rotation_s += t.rotation_s;
      sum.panel_s += t.panel_s;
      sum.defect_s += t.defect_s;
      sum.filter_s += t.filter_s;
      ++done;
      out << fmt::format("{}: {} panels, {} of {} defects kept\n", files[i].filename().string(),
                         o.result->panels.detections.size(), o.result->defects.size(),
                         o.result->raw_defects.size());
    } else {
      entry["status"] = "error";
      entry["error"] = o.error;
      err << "error: " << files[i].string() << ": " << o.error << "\n";
      code = kProcessingError;
    }
    images.push_back(std::move(entry));
  }
  manifest["images"] = images;
  const double n = done ? static_cast<double>(done) : 1.0;
  manifest["average_timings_s"] = {{"rotation", sum.rotation_s / n},
                                   {"panel", sum.panel_s / n},
                                   {"defect", sum.defect_s / n},
                                   {"filter", sum.filter_s / n},
                                   {"total", (sum.rotation_s + sum.panel_s + sum.defect_s + sum.filter_s) / n}};
  manifest["warnings"] = all_warnings;
  manifest["exit_code"] = code;
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return code;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string detections;
  std::string annotations;
  std::string iou = "0.5";
  std::string classes;
  std::string out;
  bool eleven_point = false;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream&) {
  const auto thrs = parse_list(a.iou, "--iou");
  std::vector<std::string> classes;
  std::stringstream ss(a.classes);
  for (std::string c; std::getline(ss, c, ',');) {
    if (!c.empty()) classes.push_back(c);
  }
  const auto mode = a.eleven_point ? metrics::Interpolation::eleven_point : metrics::Interpolation::all_point;
  const auto result = metrics::evaluate_run(a.detections, a.annotations, thrs, classes, mode);
  if (!a.out.empty()) write_text(a.out, metrics::format_csv(result));
  out << metrics::format_table(result);
  return kOk;
}

// ---------------------------------------------------------------------------
// anchors

struct AnchorsArgs {
  std::string annotations;
  std::size_t k_min = 1;
  std::size_t k_max = 12;
  int restarts = 8;
  std::string out;
  std::uint64_t seed = 0;
};

int cmd_anchors(const AnchorsArgs& a, std::ostream& out, std::ostream& err) {
  if (a.k_min < 1 || a.k_max < a.k_min) throw UsageError("need 1 <= --k-min <= --k-max");
  std::vector<anchors::BoxShape> shapes;
  for (const auto& f : list_files(a.annotations, is_xml)) {
    for (const auto& ann : dataset::load_annotations(f).annotations) {
      shapes.push_back({ann.box.width(), ann.box.height()});
    }
  }
  if (shapes.empty()) throw Error("no boxes found in " + a.annotations);
  std::vector<std::size_t> ks;
  for (std::size_t k = a.k_min; k <= a.k_max; ++k) ks.push_back(k);
  const auto sel = anchors::select_k(shapes, ks, a.seed, a.restarts);
  for (const auto& w : sel.warnings) err << "warning: " << w << "\n";

  fs::create_directories(a.out);
  std::string diag = "k,mean_iou,sse,silhouette\n";
  for (const auto& d : sel.per_k) {
    diag += fmt::format("{},{:.6f},{:.6f},{:.6f}\n", d.k, d.mean_iou, d.sse, d.silhouette);
  }
  write_text(fs::path(a.out) / "diagnostics.csv", diag);
  const auto best = std::find_if(sel.per_k.begin(), sel.per_k.end(),
                                 [&](const auto& d) { return d.k == sel.best_k; });
  auto centroids = best->centroids;
  std::sort(centroids.begin(), centroids.end(),
            [](const auto& x, const auto& y) { return x.area() < y.area(); });
  std::string list;
  for (const auto& c : centroids) list += fmt::format("{:.2f},{:.2f}\n", c.width, c.height);
  write_text(fs::path(a.out) / "anchors.txt", list);
  out << fmt::format("{} boxes, selected k = {}\n", shapes.size(), sel.best_k);
  return kOk;
}

// ---------------------------------------------------------------------------
// split

struct SplitArgs {
  std::string annotations;
  std::string ratios = "0.7,0.15,0.15";
  bool strict = false;
  std::string out;
  std::uint64_t seed = 0;
};

int cmd_split(const SplitArgs& a, std::ostream& out, std::ostream&) {
  const auto r = parse_list(a.ratios, "--ratios");
  if (r.size() != 3) throw UsageError("--ratios needs three values");
  const auto files = list_files(a.annotations, is_xml);
  std::vector<dataset::AnnotatedImage> images;
  for (const auto& f : files) images.push_back(dataset::load_annotations(f));
  dataset::DatasetSplit split;
  try {
    split = dataset::stratified_split(images, {r[0], r[1], r[2]}, a.seed, a.strict);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  fs::create_directories(a.out);
  auto dump = [&](const std::vector<std::size_t>& idx, const std::string& name) {
    std::string text;
    for (auto i : idx) text += files[i].filename().string() + "\n";
    write_text(fs::path(a.out) / name, text);
  };
  dump(split.train, "train.txt");
  dump(split.validation, "val.txt");
  dump(split.test, "test.txt");
  std::string fr = "class,train,val,test\n";
  for (const auto& [label, f] : split.class_fractions) {
    fr += fmt::format("{},{:.6f},{:.6f},{:.6f}\n", label, f[0], f[1], f[2]);
  }
  write_text(fs::path(a.out) / "class_fractions.csv", fr);
  out << fmt::format("{} images: {} train, {} val, {} test\n", files.size(), split.train.size(),
                     split.validation.size(), split.test.size());
  return kOk;
}

// ---------------------------------------------------------------------------
// augment

struct AugmentArgs {
  std::string annotations;
  std::string images;
  std::string profile = "defect-ir";
  std::string out;
  std::uint64_t seed = 0;
};

fs::path resolve_image(const dataset::AnnotatedImage& meta, const fs::path& xml, const std::string& images_dir) {
  std::vector<fs::path> candidates;
  if (!images_dir.empty()) candidates.push_back(fs::path(images_dir) / meta.image_path.filename());
  if (meta.image_path.is_absolute()) candidates.push_back(meta.image_path);
  candidates.push_back(xml.parent_path() / meta.image_path);
  candidates.push_back(xml.parent_path() / meta.image_path.filename());
  for (const auto& c : candidates) {
    if (fs::is_regular_file(c)) return c;
  }
  throw Error("image for " + xml.string() + " not found: " + meta.image_path.string());
}

int cmd_augment(const AugmentArgs& a, std::ostream& out, std::ostream&) {
  dataset::AugmentationSpec spec;
  if (a.profile == "defect-ir") {
    spec = dataset::AugmentationSpec::defect_ir();
  } else if (a.profile == "defect-vis") {
    spec = dataset::AugmentationSpec::defect_vis();
  } else if (a.profile == "panel") {
    spec = dataset::AugmentationSpec::panel();
  } else {
    throw UsageError("--profile must be defect-ir, defect-vis or panel");
  }
  fs::create_directories(a.out);
  const auto files = list_files(a.annotations, is_xml);
  std::size_t written = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto meta = dataset::load_annotations(files[i]);
    const Image img = io::read_image(resolve_image(meta, files[i], a.images));
    spec.seed = a.seed + i;
    std::visit(
        [&](const auto& raster) {
          for (auto& s : dataset::augment(raster, meta, spec)) {
            const fs::path name = s.annotations.image_path.filename();
            s.annotations.image_path = fs::path(a.out) / name;
            io::write_image(s.annotations.image_path, Image{std::move(s.image)});
            dataset::write_annotations(s.annotations, fs::path(a.out) / name.stem().concat(".xml"));
            ++written;
          }
        },
        img);
  }
  out << fmt::format("{} annotated images, {} augmented samples\n", files.size(), written);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Post-processing of UAV imagery of photovoltaic plants"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  app.add_option("--seed", seed, "Seed for every randomized step");
  app.add_option("--jobs", jobs, "Worker threads over images")->check(CLI::Range(1u, 256u));

  RotateArgs rot;
  auto* rotate = app.add_subcommand("rotate", "Skew-correct images via Canny and Hough");
  rotate->add_option("--images", rot.images, "Image file or directory")->required();
  rotate->add_option("--out", rot.out, "Output directory")->required();

  InspectArgs ins;
  auto* inspect = app.add_subcommand("inspect", "Run the full inspection pipeline");
  inspect->add_option("--spectrum", ins.spectrum, "ir or vis")->required();
  inspect->add_option("--images", ins.images, "Image file or directory")->required();
  inspect->add_option("--panel-detector", ins.panel_detector, "'builtin' or a command with {input} and {output}");
  inspect->add_option("--defect-detector", ins.defect_detector, "'builtin' or a command with {input} and {output}");
  inspect->add_option("--config", ins.config, "key = value configuration file");
  inspect->add_option("--set", ins.overrides, "Override a configuration key (key=value)");
  inspect->add_option("--out", ins.out, "Output directory")->required();
  inspect->add_flag("--overlay", ins.overlay, "Also write annotated overlay images");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "PASCAL VOC metrics of detection CSVs");
  evaluate->add_option("--detections", ev.detections, "Directory of <stem>.csv files")->required();
  evaluate->add_option("--annotations", ev.annotations, "Directory of <stem>.xml files")->required();
  evaluate->add_option("--iou", ev.iou, "Comma-separated IoU thresholds")->capture_default_str();
  evaluate->add_option("--classes", ev.classes, "Comma-separated classes (default: all)");
  evaluate->add_option("--out", ev.out, "Metrics CSV path");
  evaluate->add_flag("--eleven-point", ev.eleven_point, "11-point interpolated AP");

  AnchorsArgs an;
  auto* anchors_cmd = app.add_subcommand("anchors", "IoU k-means anchor clustering");
  anchors_cmd->add_option("--annotations", an.annotations, "Directory of VOC XML files")->required();
  anchors_cmd->add_option("--k-min", an.k_min)->capture_default_str();
  anchors_cmd->add_option("--k-max", an.k_max)->capture_default_str();
  anchors_cmd->add_option("--restarts", an.restarts)->capture_default_str()->check(CLI::PositiveNumber);
  anchors_cmd->add_option("--out", an.out, "Output directory")->required();

  SplitArgs sp;
  auto* split = app.add_subcommand("split", "Stratified train/validation/test split");
  split->add_option("--annotations", sp.annotations, "Directory of VOC XML files")->required();
  split->add_option("--ratios", sp.ratios)->capture_default_str();
  split->add_flag("--strict", sp.strict, "Reject classes present in fewer than 3 images");
  split->add_option("--out", sp.out, "Output directory")->required();

  AugmentArgs au;
  auto* augment = app.add_subcommand("augment", "Geometric data augmentation");
  augment->add_option("--annotations", au.annotations, "Directory of VOC XML files")->required();
  augment->add_option("--images", au.images, "Directory holding the annotated images");
  augment->add_option("--profile", au.profile, "defect-ir, defect-vis or panel")->capture_default_str();
  augment->add_option("--out", au.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  const std::uint64_t s = seed.value_or(0);
  try {
    if (*rotate) {
      rot.jobs = jobs;
      return cmd_rotate(rot, out, err);
    }
    if (*inspect) {
      ins.jobs = jobs;
      ins.seed = seed;
      return cmd_inspect(ins, out, err);
    }
    if (*evaluate) return cmd_evaluate(ev, out, err);
    if (*anchors_cmd) {
      an.seed = s;
      return cmd_anchors(an, out, err);
    }
    if (*split) {
      sp.seed = s;
      return cmd_split(sp, out, err);
    }
    if (*augment) {
      au.seed = s;
      return cmd_augment(au, out, err);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kProcessingError;
  }
  return kUsageError;
}

}  // namespace pvinspect::cli
