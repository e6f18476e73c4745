#include "pvinspect/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "pvinspect/error.hpp"

namespace pvinspect::io {

Image read_image(const std::filesystem::path& path) {
  const cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) throw Error("cannot read image " + path.string());
  const int w = m.cols;
  const int h = m.rows;
  if (m.channels() == 1 && m.depth() == CV_16U) {
    Gray16Image out(w, h);
    for (int y = 0; y < h; ++y) {
      const auto* src = m.ptr<std::uint16_t>(y);
      std::copy(src, src + w, out.row(y).begin());
    }
    return out;
  }
  if (m.depth() != CV_8U) throw Error("unsupported pixel depth in " + path.string());
  if (m.channels() == 1) {
    Gray8Image out(w, h);
    for (int y = 0; y < h; ++y) {
      const auto* src = m.ptr<std::uint8_t>(y);
      std::copy(src, src + w, out.row(y).begin());
    }
    return out;
  }
  RgbImage out(w, h);
  const int ch = m.channels();
  for (int y = 0; y < h; ++y) {
    const auto* src = m.ptr<std::uint8_t>(y);
    auto dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      // OpenCV stores BGR(A).
      dst[x] = {src[x * ch + 2], src[x * ch + 1], src[x * ch]};
    }
  }
  return out;
}

void write_image(const std::filesystem::path& path, const Image& img) {
  cv::Mat m;
  if (const auto* g16 = std::get_if<Gray16Image>(&img)) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext != ".png" && ext != ".tif" && ext != ".tiff") {
      throw Error("16-bit images need a PNG or TIFF path, got " + path.string());
    }
    m = cv::Mat(g16->height(), g16->width(), CV_16UC1);
    for (int y = 0; y < g16->height(); ++y) {
      const auto src = g16->row(y);
      std::copy(src.begin(), src.end(), m.ptr<std::uint16_t>(y));
    }
  } else if (const auto* g8 = std::get_if<Gray8Image>(&img)) {
    m = cv::Mat(g8->height(), g8->width(), CV_8UC1);
    for (int y = 0; y < g8->height(); ++y) {
      const auto src = g8->row(y);
      std::copy(src.begin(), src.end(), m.ptr<std::uint8_t>(y));
    }
  } else {
    const auto& rgb = std::get<RgbImage>(img);
    m = cv::Mat(rgb.height(), rgb.width(), CV_8UC3);
    for (int y = 0; y < rgb.height(); ++y) {
      const auto src = rgb.row(y);
      auto* dst = m.ptr<std::uint8_t>(y);
      for (int x = 0; x < rgb.width(); ++x) {
        dst[3 * x] = src[x].b;
        dst[3 * x + 1] = src[x].g;
        dst[3 * x + 2] = src[x].r;
      }
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), m);
  } catch (const cv::Exception& e) {
    throw Error("cannot write image " + path.string() + ": " + e.what());
  }
  if (!ok) throw Error("cannot write image " + path.string());
}

}  // namespace pvinspect::io
