#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "pvinspect/error.hpp"
#include "pvinspect/imaging.hpp"

namespace pvinspect::imaging {
namespace {

template <typename Pixel>
struct Accum {
  double v = 0.0;
  void add(const Pixel& p, double w) { v += w * static_cast<double>(p); }
  Pixel get() const {
    if constexpr (std::is_floating_point_v<Pixel>) {
      return static_cast<Pixel>(v);
    } else {
      const double hi = static_cast<double>(std::numeric_limits<Pixel>::max());
      return static_cast<Pixel>(std::clamp(std::round(v), 0.0, hi));
    }
  }
};

template <>
struct Accum<Rgb8> {
  double r = 0.0, g = 0.0, b = 0.0;
  void add(const Rgb8& p, double w) {
    r += w * p.r;
    g += w * p.g;
    b += w * p.b;
  }
  Rgb8 get() const {
    const auto q = [](double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); };
    return {q(r), q(g), q(b)};
  }
};

// Samples at continuous pixel coordinates (pixel centers at +0.5), treating
// everything outside the frame as black.
template <typename Pixel>
Pixel sample_bilinear(const Raster<Pixel>& img, double cx, double cy) {
  const double fx = cx - 0.5;
  const double fy = cy - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const int x0 = static_cast<int>(x0f);
  const int y0 = static_cast<int>(y0f);
  const double ax = fx - x0f;
  const double ay = fy - y0f;
  Accum<Pixel> acc;
  const auto tap = [&](int x, int y, double wgt) {
    if (wgt != 0.0 && img.contains(x, y)) acc.add(img(x, y), wgt);
  };
  tap(x0, y0, (1 - ax) * (1 - ay));
  tap(x0 + 1, y0, ax * (1 - ay));
  tap(x0, y0 + 1, (1 - ax) * ay);
  tap(x0 + 1, y0 + 1, ax * ay);
  return acc.get();
}

}  // namespace

template <typename Pixel>
Raster<Pixel> warp(const Raster<Pixel>& img, const RigidTransform& t) {
  if (t.source() != img.size()) throw InvalidArgument("warp: transform source does not match image");
  const RigidTransform back = invert(t);
  const FrameSize dst = t.destination();
  Raster<Pixel> out(dst.width, dst.height);
  const bool exact = t.quarter_turns() >= 0;
  for (int y = 0; y < dst.height; ++y) {
    for (int x = 0; x < dst.width; ++x) {
      const Point p = back.apply({x + 0.5, y + 0.5});
      if (exact) {
        // Half-integer centers map to half-integer centers exactly.
        const int sx = static_cast<int>(std::floor(p.x));
        const int sy = static_cast<int>(std::floor(p.y));
        if (img.contains(sx, sy)) out(x, y) = img(sx, sy);
      } else {
        out(x, y) = sample_bilinear(img, p.x, p.y);
      }
    }
  }
  return out;
}

template <typename Pixel>
Warped<Pixel> rotate_image(const Raster<Pixel>& img, double angle_deg) {
  const RigidTransform t = RigidTransform::rotation(angle_deg, img.size());
  if (t.is_identity()) return {img, t};
  return {warp(img, t), t};
}

template <typename Pixel>
Raster<Pixel> flip_image(const Raster<Pixel>& img, bool horizontal, bool vertical) {
  return warp(img, RigidTransform::flip(horizontal, vertical, img.size()));
}

template <typename Pixel>
Raster<Pixel> resize_bilinear(const Raster<Pixel>& img, int width, int height) {
  Raster<Pixel> out(width, height);
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      // Clamp so the border replicates instead of fading to black.
      const double cx = std::clamp((x + 0.5) * sx, 0.5, img.width() - 0.5);
      const double cy = std::clamp((y + 0.5) * sy, 0.5, img.height() - 0.5);
      out(x, y) = sample_bilinear(img, cx, cy);
    }
  }
  return out;
}

template <typename Pixel>
Raster<Pixel> crop(const Raster<Pixel>& img, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width < 1 || height < 1 || x0 + width > img.width() ||
      y0 + height > img.height()) {
    throw InvalidArgument("crop window outside the image");
  }
  Raster<Pixel> out(width, height);
  for (int y = 0; y < height; ++y) {
    const auto src = img.row(y0 + y).subspan(static_cast<std::size_t>(x0), static_cast<std::size_t>(width));
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

#define PVINSPECT_INSTANTIATE(P)                                                   \
  template Raster<P> warp(const Raster<P>&, const RigidTransform&);               \
  template Warped<P> rotate_image(const Raster<P>&, double);                      \
  template Raster<P> flip_image(const Raster<P>&, bool, bool);                    \
  template Raster<P> resize_bilinear(const Raster<P>&, int, int);                 \
  template Raster<P> crop(const Raster<P>&, int, int, int, int);

PVINSPECT_INSTANTIATE(std::uint8_t)
PVINSPECT_INSTANTIATE(std::uint16_t)
PVINSPECT_INSTANTIATE(Rgb8)
PVINSPECT_INSTANTIATE(float)

#undef PVINSPECT_INSTANTIATE

}  // namespace pvinspect::imaging
