#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "pvinspect/error.hpp"
#include "pvinspect/imaging.hpp"

namespace pvinspect::imaging {

Gray8Image normalize_radiometric(const Gray16Image& raw) {
  const auto px = raw.pixels();
  const auto [lo_it, hi_it] = std::minmax_element(px.begin(), px.end());
  const double lo = *lo_it;
  const double range = static_cast<double>(*hi_it) - lo;
  Gray8Image out(raw.width(), raw.height());
  if (range <= 0.0) return out;
  auto dst = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    dst[i] = static_cast<std::uint8_t>(std::lround(255.0 * (px[i] - lo) / range));
  }
  return out;
}

namespace {

Palette build_rainbow() {
  Palette p{};
  for (int i = 0; i < 256; ++i) {
    // Position along four 255-wide ramps; i * 4 never lands on a ramp joint
    // except at the final entry, which keeps every color distinct.
    const int pos = i * 4;
    const int seg = std::min(pos / 255, 3);
    const auto f = static_cast<std::uint8_t>(pos - 255 * seg);
    const auto rf = static_cast<std::uint8_t>(255 - f);
    switch (seg) {
      case 0: p[i] = {0, f, 255}; break;     // blue -> cyan
      case 1: p[i] = {0, 255, rf}; break;    // cyan -> green
      case 2: p[i] = {f, 255, 0}; break;     // green -> yellow
      default: p[i] = {255, rf, 0}; break;   // yellow -> red
    }
  }
  return p;
}

}  // namespace

const Palette& rainbow_palette() {
  static const Palette palette = build_rainbow();
  return palette;
}

Palette load_palette_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open palette " + path.string());
  Palette p{};
  std::string line;
  std::size_t n = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (n == 256) throw ParseError("palette has more than 256 entries", line_no);
    std::istringstream row(line);
    int r = -1, g = -1, b = -1;
    char c1 = 0, c2 = 0;
    if (!(row >> r >> c1 >> g >> c2 >> b) || c1 != ',' || c2 != ',' || r < 0 || r > 255 ||
        g < 0 || g > 255 || b < 0 || b > 255) {
      throw ParseError("palette row must be r,g,b with values in 0..255", line_no);
    }
    p[n++] = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
              static_cast<std::uint8_t>(b)};
  }
  if (n != 256) throw ParseError("palette has " + std::to_string(n) + " entries, expected 256", 0);
  return p;
}

void write_palette_csv(const Palette& palette, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write palette " + path.string());
  for (const auto& c : palette) out << int{c.r} << ',' << int{c.g} << ',' << int{c.b} << '\n';
}

RgbImage false_color(const Gray8Image& gray, const Palette& palette) {
  RgbImage out(gray.width(), gray.height());
  auto dst = out.pixels();
  auto src = gray.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = palette[src[i]];
  return out;
}

void validate(const Calibration& cal) {
  if (!std::isfinite(cal.gain) || !std::isfinite(cal.offset)) {
    throw InvalidArgument("calibration gain and offset must be finite");
  }
  if (cal.gain <= 0.0) throw InvalidArgument("calibration gain must be positive");
}

double temperature_of(std::uint16_t raw, const Calibration& cal) {
  validate(cal);
  return cal.gain * raw + cal.offset;
}

TemperatureMap temperature_map(const Gray16Image& raw, const Calibration& cal) {
  validate(cal);
  TemperatureMap out(raw.width(), raw.height());
  auto dst = out.pixels();
  auto src = raw.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = cal.gain * src[i] + cal.offset;
  return out;
}

Gray8Image to_gray8(const Image& img) {
  if (const auto* g16 = std::get_if<Gray16Image>(&img)) return normalize_radiometric(*g16);
  if (const auto* g8 = std::get_if<Gray8Image>(&img)) return *g8;
  const auto& rgb = std::get<RgbImage>(img);
  Gray8Image out(rgb.width(), rgb.height());
  auto dst = out.pixels();
  auto src = rgb.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double y = 0.299 * src[i].r + 0.587 * src[i].g + 0.114 * src[i].b;
    dst[i] = static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
  }
  return out;
}

}  // namespace pvinspect::imaging
