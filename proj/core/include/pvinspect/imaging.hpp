#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pvinspect/raster.hpp"
#include "pvinspect/transform.hpp"

namespace pvinspect::imaging {

// ---------------------------------------------------------------------------
// Radiometry and color

/// Min-max stretch of raw sensor readings onto 0..255. A constant input maps
/// to all zeros.
Gray8Image normalize_radiometric(const Gray16Image& raw);

using Palette = std::array<Rgb8, 256>;

/// Blue -> cyan -> green -> yellow -> red ramp; every entry is distinct.
const Palette& rainbow_palette();
Palette load_palette_csv(const std::filesystem::path& path);
void write_palette_csv(const Palette& palette, const std::filesystem::path& path);

RgbImage false_color(const Gray8Image& gray, const Palette& palette = rainbow_palette());

/// Affine sensor calibration, T[C] = gain * raw + offset.
struct Calibration {
  double gain = 0.04;
  double offset = -273.15;
};

/// Throws InvalidArgument for non-finite values or a non-positive gain.
void validate(const Calibration& cal);

double temperature_of(std::uint16_t raw, const Calibration& cal);

using TemperatureMap = Raster<double>;
TemperatureMap temperature_map(const Gray16Image& raw, const Calibration& cal);

/// Luma (BT.601) of a color image; 16-bit input is min-max normalized.
Gray8Image to_gray8(const Image& img);

// ---------------------------------------------------------------------------
// Filtering

/// Separable (1,4,6,4,1)/16 binomial smoothing with edge replication.
/// Integer rasters are rounded to nearest. Throws for images under 5x5.
FloatImage gaussian_5x5(const FloatImage& img);
Gray8Image gaussian_5x5(const Gray8Image& img);
Gray16Image gaussian_5x5(const Gray16Image& img);

template <typename Pixel>
FloatImage to_float(const Raster<Pixel>& img) {
  FloatImage out(img.width(), img.height());
  auto dst = out.pixels();
  auto src = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<float>(src[i]);
  return out;
}

/// Gradient direction quantized for non-maximum suppression.
enum class Direction : std::uint8_t { deg0 = 0, deg45 = 1, deg90 = 2, deg135 = 3 };

struct GradientField {
  FloatImage gx;
  FloatImage gy;
  FloatImage magnitude;
  Raster<Direction> direction;
};

/// 3x3 Sobel derivatives with edge replication. Throws for images under 3x3.
GradientField sobel_gradient(const FloatImage& img);

// ---------------------------------------------------------------------------
// Canny with adaptive hysteresis thresholds

struct CannyConfig {
  double g_min = 450.0;
  double g_max = 550.0;
  double step = 50.0;
  std::size_t n_thr = 1000;
  /// Lowest g_min the loop will try. The default makes the last pass run
  /// with g_max = 0.
  double floor = -100.0;
};

void validate(const CannyConfig& cfg);

/// Thinned edge candidates (after non-maximum suppression) together with their
/// magnitude, reusable across hysteresis passes.
struct EdgeCandidates {
  FloatImage magnitude;
  Raster<std::uint8_t> is_peak;
};

EdgeCandidates edge_candidates(const FloatImage& img);

/// 8-connected hysteresis: peaks with magnitude > g_max seed edges, peaks with
/// magnitude > g_min join when connected to a seed.
EdgeMap hysteresis(const EdgeCandidates& candidates, double g_min, double g_max);

std::size_t count_edges(const EdgeMap& edges);

struct CannyResult {
  EdgeMap edges{1, 1, 0};
  double g_min = 0.0;
  double g_max = 0.0;
  int iterations = 0;
  std::size_t edge_count = 0;
  std::vector<double> g_min_history;
};

/// Lowers both thresholds by `step` until at least `n_thr` edge pixels are
/// found. Throws FeaturelessImageError when the floor is reached first.
CannyResult canny_adaptive(const FloatImage& img, const CannyConfig& cfg = {});
CannyResult canny_adaptive(const Gray8Image& img, const CannyConfig& cfg = {});

/// Index of the elbow of an increasing curve: the interior point farthest from
/// the chord joining the first and last points. Ties go to the lowest index.
std::size_t elbow_index(std::span<const double> values);

/// Edge-count threshold at the elbow of the sorted per-image edge counts.
std::size_t elbow_n_thr(std::span<const std::size_t> sorted_edge_counts);

// ---------------------------------------------------------------------------
// Hough lines

struct HoughLine {
  double rho = 0.0;    ///< pixels
  double theta = 0.0;  ///< radians in [0, pi)
};

struct HoughConfig {
  /// Starting vote threshold; 0 selects max(width, height) / 2.
  double initial_votes = 0.0;
  double decay = 0.9;
  double min_votes = 10.0;
};

struct HoughResult {
  HoughLine line;
  std::size_t votes = 0;
  double threshold = 0.0;
  int iterations = 0;
  /// Set when no cell reached `min_votes`; `line` is still the best cell.
  bool below_min_votes = false;
};

/// Strongest line in a 1 degree x 1 pixel accumulator, located by lowering
/// the vote threshold geometrically until a cell qualifies. Ties go to the
/// smallest theta, then the smallest rho. Throws when the edge map is empty.
HoughResult hough_dominant_line(const EdgeMap& edges, const HoughConfig& cfg = {});

/// Signed rotation (degrees, counter-clockwise positive) that brings the line
/// onto the nearest image axis, in (-45, 45].
double rotation_angle_from_line(const HoughLine& line);

struct SkewEstimate {
  double correction_deg = 0.0;
  bool featureless = false;
  CannyResult canny;
  HoughResult hough;
};

/// Canny -> Hough -> nearest-axis correction. A featureless image yields a
/// zero correction with `featureless` set.
SkewEstimate estimate_skew(const Gray8Image& gray, const CannyConfig& canny = {},
                           const HoughConfig& hough = {});

// ---------------------------------------------------------------------------
// Geometry on rasters

template <typename Pixel>
struct Warped {
  Raster<Pixel> image;
  RigidTransform transform;
};

/// Resamples `img` through `t` (source must match the image). Right-angle
/// transforms permute pixels exactly; other angles use bilinear sampling with
/// black outside the source frame.
template <typename Pixel>
Raster<Pixel> warp(const Raster<Pixel>& img, const RigidTransform& t);

/// Rotation about the image center onto an expanded canvas.
template <typename Pixel>
Warped<Pixel> rotate_image(const Raster<Pixel>& img, double angle_deg);

template <typename Pixel>
Raster<Pixel> flip_image(const Raster<Pixel>& img, bool horizontal, bool vertical);

template <typename Pixel>
Raster<Pixel> resize_bilinear(const Raster<Pixel>& img, int width, int height);

template <typename Pixel>
Raster<Pixel> crop(const Raster<Pixel>& img, int x0, int y0, int width, int height);

}  // namespace pvinspect::imaging
