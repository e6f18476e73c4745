#include <algorithm>
#include <cmath>
#include <random>

#include "pvinspect/dataset.hpp"
#include "pvinspect/error.hpp"
#include "pvinspect/imaging.hpp"

namespace pvinspect::dataset {
namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::filesystem::path suffixed(const std::filesystem::path& p, const std::string& suffix) {
  std::filesystem::path out = p;
  out.replace_filename(p.stem().string() + "_" + suffix + p.extension().string());
  return out;
}

bool has_area(const BoundingBox& b) { return b.x_max > b.x_min && b.y_max > b.y_min; }

}  // namespace

AugmentationSpec AugmentationSpec::defect_ir() {
  AugmentationSpec s;
  s.rotation = s.horizontal_flip = s.vertical_flip = s.cropping = s.scaling = true;
  return s;
}

AugmentationSpec AugmentationSpec::defect_vis() {
  AugmentationSpec s = defect_ir();
  s.rotation = false;
  return s;
}

AugmentationSpec AugmentationSpec::panel() {
  AugmentationSpec s;
  s.horizontal_flip = s.vertical_flip = true;
  return s;
}

void validate(const AugmentationSpec& spec) {
  if (spec.rotation) {
    if (spec.rotation_mode == RotationMode::right_angles) {
      if (spec.right_angles.empty()) throw InvalidArgument("rotation enabled with no angles");
      for (int a : spec.right_angles) {
        if (a % 90 != 0) throw InvalidArgument("right-angle rotation list holds " + std::to_string(a));
      }
    } else if (!(spec.rotation_min_deg <= spec.rotation_max_deg) ||
               !std::isfinite(spec.rotation_min_deg) || !std::isfinite(spec.rotation_max_deg)) {
      throw InvalidArgument("rotation enabled with an empty angle range");
    }
  }
  if (spec.cropping) {
    if (!(spec.crop_min_fraction > 0.0 && spec.crop_min_fraction <= spec.crop_max_fraction &&
          spec.crop_max_fraction <= 1.0)) {
      throw InvalidArgument("cropping enabled with an empty fraction range");
    }
    if (spec.crop_attempts < 1) throw InvalidArgument("crop_attempts must be at least 1");
  }
  if (spec.scaling && !(spec.scale_min > 0.0 && spec.scale_min <= spec.scale_max &&
                        std::isfinite(spec.scale_max))) {
    throw InvalidArgument("scaling enabled with an empty or non-positive factor range");
  }
}

template <typename Pixel>
AugmentedSample<Pixel> apply_rigid(const Raster<Pixel>& image, const AnnotatedImage& meta,
                                   const RigidTransform& t, std::string name) {
  if (t.source() != image.size()) throw InvalidArgument("transform does not match the image");
  AugmentedSample<Pixel> out{imaging::warp(image, t), meta, name};
  out.annotations.size = t.destination();
  out.annotations.image_path = suffixed(meta.image_path, name);
  out.annotations.annotations.clear();
  for (const auto& a : meta.annotations) {
    const BoundingBox b = transform_box(a.box, t);
    if (has_area(b)) out.annotations.annotations.push_back({b, a.class_label});
  }
  return out;
}

template <typename Pixel>
std::optional<AugmentedSample<Pixel>> apply_crop(const Raster<Pixel>& image,
                                                 const AnnotatedImage& meta, int x0, int y0,
                                                 int width, int height) {
  AugmentedSample<Pixel> out{imaging::crop(image, x0, y0, width, height), meta, "crop"};
  out.annotations.size = {width, height};
  out.annotations.image_path = suffixed(meta.image_path, "crop");
  out.annotations.annotations.clear();
  for (const auto& a : meta.annotations) {
    const BoundingBox moved{a.box.x_min - x0, a.box.y_min - y0, a.box.x_max - x0, a.box.y_max - y0};
    const BoundingBox b = clip(moved, width, height);
    if (has_area(b)) out.annotations.annotations.push_back({b, a.class_label});
  }
  if (out.annotations.annotations.empty()) return std::nullopt;
  return out;
}

template <typename Pixel>
AugmentedSample<Pixel> apply_scale(const Raster<Pixel>& image, const AnnotatedImage& meta,
                                   double factor) {
  if (!(factor > 0.0)) throw InvalidArgument("scale factor must be positive");
  const int w = std::max(1, static_cast<int>(std::lround(image.width() * factor)));
  const int h = std::max(1, static_cast<int>(std::lround(image.height() * factor)));
  const double fx = static_cast<double>(w) / image.width();
  const double fy = static_cast<double>(h) / image.height();
  AugmentedSample<Pixel> out{imaging::resize_bilinear(image, w, h), meta, "scale"};
  out.annotations.size = {w, h};
  out.annotations.image_path = suffixed(meta.image_path, "scale");
  out.annotations.annotations.clear();
  for (const auto& a : meta.annotations) {
    const BoundingBox b = clip({a.box.x_min * fx, a.box.y_min * fy, a.box.x_max * fx, a.box.y_max * fy}, w, h);
    if (has_area(b)) out.annotations.annotations.push_back({b, a.class_label});
  }
  return out;
}

template <typename Pixel>
std::vector<AugmentedSample<Pixel>> augment(const Raster<Pixel>& image, const AnnotatedImage& meta,
                                            const AugmentationSpec& spec) {
  validate(spec);
  if (meta.size != image.size()) throw InvalidArgument("annotation size does not match the image");
  std::mt19937_64 rng(spec.seed);
  std::vector<AugmentedSample<Pixel>> out;
  const FrameSize frame = image.size();

  if (spec.rotation) {
    double angle = 0.0;
    if (spec.rotation_mode == RotationMode::right_angles) {
      const auto pick = static_cast<std::size_t>(uniform01(rng) * spec.right_angles.size());
      angle = spec.right_angles[pick];
    } else {
      angle = uniform(rng, spec.rotation_min_deg, spec.rotation_max_deg);
    }
    out.push_back(apply_rigid(image, meta, RigidTransform::rotation(angle, frame), "rot"));
  }
  if (spec.horizontal_flip) {
    out.push_back(apply_rigid(image, meta, RigidTransform::flip(true, false, frame), "hflip"));
  }
  if (spec.vertical_flip) {
    out.push_back(apply_rigid(image, meta, RigidTransform::flip(false, true, frame), "vflip"));
  }
  if (spec.cropping) {
    for (int attempt = 0; attempt < spec.crop_attempts; ++attempt) {
      const int cw = std::clamp(static_cast<int>(std::lround(
                                    frame.width * uniform(rng, spec.crop_min_fraction, spec.crop_max_fraction))),
                                1, frame.width);
      const int ch = std::clamp(static_cast<int>(std::lround(
                                    frame.height * uniform(rng, spec.crop_min_fraction, spec.crop_max_fraction))),
                                1, frame.height);
      const int x0 = static_cast<int>(uniform01(rng) * (frame.width - cw + 1));
      const int y0 = static_cast<int>(uniform01(rng) * (frame.height - ch + 1));
      if (auto sample = apply_crop(image, meta, x0, y0, cw, ch)) {
        out.push_back(std::move(*sample));
        break;
      }
    }
  }
  if (spec.scaling) {
    out.push_back(apply_scale(image, meta, uniform(rng, spec.scale_min, spec.scale_max)));
  }
  return out;
}

#define PVINSPECT_INSTANTIATE(P)                                                                 \
  template AugmentedSample<P> apply_rigid(const Raster<P>&, const AnnotatedImage&,              \
                                          const RigidTransform&, std::string);                  \
  template std::optional<AugmentedSample<P>> apply_crop(const Raster<P>&, const AnnotatedImage&, \
                                                        int, int, int, int);                    \
  template AugmentedSample<P> apply_scale(const Raster<P>&, const AnnotatedImage&, double);     \
  template std::vector<AugmentedSample<P>> augment(const Raster<P>&, const AnnotatedImage&,     \
                                                   const AugmentationSpec&);

PVINSPECT_INSTANTIATE(std::uint8_t)
PVINSPECT_INSTANTIATE(std::uint16_t)
PVINSPECT_INSTANTIATE(Rgb8)

#undef PVINSPECT_INSTANTIATE

}  // namespace pvinspect::dataset
