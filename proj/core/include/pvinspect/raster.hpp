#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pvinspect/error.hpp"
#include "pvinspect/transform.hpp"

namespace pvinspect {

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

/// Row-major 2-D pixel grid. Width and height are at least 1.
template <typename Pixel>
class Raster {
 public:
  using value_type = Pixel;

  Raster(int width, int height, Pixel fill = Pixel{})
      : width_(width), height_(height), pixels_(checked_size(width, height), fill) {}

  Raster(int width, int height, std::vector<Pixel> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != checked_size(width, height)) {
      throw InvalidArgument("pixel buffer length does not match raster dimensions");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  FrameSize size() const noexcept { return {width_, height_}; }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }

  Pixel& operator()(int x, int y) noexcept { return pixels_[index(x, y)]; }
  const Pixel& operator()(int x, int y) const noexcept { return pixels_[index(x, y)]; }

  /// Coordinates clamped into the frame (edge replication).
  const Pixel& clamped(int x, int y) const noexcept {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return pixels_[index(x, y)];
  }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<Pixel> pixels() noexcept { return pixels_; }
  std::span<const Pixel> pixels() const noexcept { return pixels_; }
  std::span<Pixel> row(int y) noexcept {
    return std::span<Pixel>(pixels_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<const Pixel> row(int y) const noexcept {
    return std::span<const Pixel>(pixels_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  static std::size_t checked_size(int width, int height) {
    if (width < 1 || height < 1) throw InvalidArgument("raster dimensions must be at least 1x1");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<Pixel> pixels_;
};

using Gray8Image = Raster<std::uint8_t>;
using Gray16Image = Raster<std::uint16_t>;
using RgbImage = Raster<Rgb8>;
using FloatImage = Raster<float>;

/// Any image the pipeline accepts: radiometric, gray or color.
using Image = std::variant<Gray16Image, Gray8Image, RgbImage>;

inline FrameSize frame_of(const Image& img) {
  return std::visit([](const auto& r) { return r.size(); }, img);
}

/// Binary edge mask; 1 marks an edge pixel.
using EdgeMap = Raster<std::uint8_t>;

}  // namespace pvinspect
