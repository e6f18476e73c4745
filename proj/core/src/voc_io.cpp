#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "pvinspect/dataset.hpp"
#include "pvinspect/error.hpp"

namespace pvinspect::dataset {
namespace {

namespace pt = boost::property_tree;

double parse_number(const std::string& text, const std::string& field, const std::string& source) {
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ParseError(source + ": field '" + field + "' is not a number: '" + text + "'", 0);
  }
  return v;
}

std::string required(const pt::ptree& node, const std::string& key, const std::string& source) {
  const auto child = node.get_optional<std::string>(key);
  if (!child) throw ParseError(source + ": missing element '" + key + "'", 0);
  return *child;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

AnnotatedImage parse_annotations(std::string_view xml, const std::string& source_name) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(source_name + ": " + e.message(), e.line());
  }
  const auto root_opt = tree.get_child_optional("annotation");
  if (!root_opt) throw ParseError(source_name + ": missing <annotation> root", 0);
  const pt::ptree& root = *root_opt;

  AnnotatedImage img;
  if (const auto path = root.get_optional<std::string>("path")) {
    img.image_path = *path;
  } else {
    img.image_path = required(root, "filename", source_name);
  }
  const double w = parse_number(required(root, "size.width", source_name), "size.width", source_name);
  const double h = parse_number(required(root, "size.height", source_name), "size.height", source_name);
  if (w < 1 || h < 1 || w != std::floor(w) || h != std::floor(h)) {
    throw ParseError(source_name + ": image size must be positive integers", 0);
  }
  img.size = {static_cast<int>(w), static_cast<int>(h)};

  std::size_t index = 0;
  for (const auto& [tag, obj] : root) {
    if (tag != "object") continue;
    ++index;
    const std::string where = source_name + ": object " + std::to_string(index);
    Annotation a;
    a.class_label = required(obj, "name", where);
    if (a.class_label.empty()) throw ParseError(where + ": empty class name", 0);
    const double x0 = parse_number(required(obj, "bndbox.xmin", where), "xmin", where);
    const double y0 = parse_number(required(obj, "bndbox.ymin", where), "ymin", where);
    const double x1 = parse_number(required(obj, "bndbox.xmax", where), "xmax", where);
    const double y1 = parse_number(required(obj, "bndbox.ymax", where), "ymax", where);
    if (x0 > x1 || y0 > y1) throw ParseError(where + ": inverted box corners", 0);
    a.box = clip(BoundingBox{x0, y0, x1, y1}, w, h);
    if (a.box.x_max <= a.box.x_min || a.box.y_max <= a.box.y_min) {
      throw ParseError(where + ": box is empty after clipping to the image", 0);
    }
    img.annotations.push_back(std::move(a));
  }
  return img;
}

AnnotatedImage load_annotations(const std::filesystem::path& xml_path) {
  return parse_annotations(read_file(xml_path), xml_path.string());
}

std::string format_annotations(const AnnotatedImage& image) {
  pt::ptree root;
  root.put("folder", image.image_path.parent_path().filename().string());
  root.put("filename", image.image_path.filename().string());
  root.put("path", image.image_path.string());
  root.put("source.database", "Unknown");
  root.put("size.width", image.size.width);
  root.put("size.height", image.size.height);
  root.put("size.depth", 3);
  root.put("segmented", 0);
  for (const auto& a : image.annotations) {
    pt::ptree obj;
    obj.put("name", a.class_label);
    obj.put("pose", "Unspecified");
    obj.put("truncated", 0);
    obj.put("difficult", 0);
    obj.put("bndbox.xmin", fmt::format("{:.6f}", a.box.x_min));
    obj.put("bndbox.ymin", fmt::format("{:.6f}", a.box.y_min));
    obj.put("bndbox.xmax", fmt::format("{:.6f}", a.box.x_max));
    obj.put("bndbox.ymax", fmt::format("{:.6f}", a.box.y_max));
    root.add_child("object", obj);
  }
  pt::ptree doc;
  doc.add_child("annotation", root);
  std::ostringstream out;
  pt::write_xml(out, doc, pt::xml_writer_make_settings<std::string>(' ', 2));
  return out.str();
}

void write_annotations(const AnnotatedImage& image, const std::filesystem::path& xml_path) {
  write_file(xml_path, format_annotations(image));
}

std::string format_detections_csv(std::span<const Detection> detections) {
  std::string out;
  for (const auto& d : detections) {
    validate(d);
    if (d.class_label.find_first_of(",\r\n") != std::string::npos) {
      throw InvalidArgument("class label '" + d.class_label + "' cannot be written to CSV");
    }
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", d.class_label, d.confidence,
                       d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max);
  }
  return out;
}

void write_detections_csv(std::span<const Detection> detections, const std::filesystem::path& path) {
  write_file(path, format_detections_csv(detections));
}

std::vector<Detection> parse_detections_csv(std::string_view text) {
  std::vector<Detection> out;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 6) {
      throw ParseError("detection row has " + std::to_string(fields.size()) + " fields, expected 6", row);
    }
    std::array<double, 5> v{};
    for (std::size_t i = 0; i < 5; ++i) {
      const auto f = fields[i + 1];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v[i]);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v[i])) {
        throw ParseError("detection row field " + std::to_string(i + 2) + " is not a number", row);
      }
    }
    Detection d{{v[1], v[2], v[3], v[4]}, std::string(fields[0]), v[0]};
    if (d.class_label.empty()) throw ParseError("detection row has an empty class label", row);
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw ParseError("confidence " + std::string(fields[1]) + " outside [0, 1]", row);
    }
    if (!d.box.valid()) throw ParseError("detection row has inverted box corners", row);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Detection> read_detections_csv(const std::filesystem::path& path) {
  try {
    return parse_detections_csv(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.message(), e.line());
  }
}

DetectionSet read_detection_set(const std::filesystem::path& path, FrameSize frame,
                                std::string image_id) {
  return {std::move(image_id), RigidTransform::identity(frame), read_detections_csv(path)};
}

}  // namespace pvinspect::dataset
