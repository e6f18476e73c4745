#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pvinspect/error.hpp"
#include "pvinspect/imaging.hpp"

namespace pvinspect::imaging {

HoughResult hough_dominant_line(const EdgeMap& edges, const HoughConfig& cfg) {
  if (!(cfg.decay > 0.0 && cfg.decay < 1.0)) throw InvalidArgument("hough decay must be in (0, 1)");
  constexpr int kThetaBins = 180;
  const int w = edges.width();
  const int h = edges.height();
  const int max_rho = static_cast<int>(std::ceil(std::hypot(w, h)));
  const int rho_bins = 2 * max_rho + 1;

  std::array<double, kThetaBins> cos_t{};
  std::array<double, kThetaBins> sin_t{};
  for (int t = 0; t < kThetaBins; ++t) {
    const double rad = t * std::numbers::pi / 180.0;
    cos_t[t] = std::cos(rad);
    sin_t[t] = std::sin(rad);
  }
  // Exact values on the axes keep axis-aligned lines in a single cell.
  cos_t[90] = 0.0;
  sin_t[0] = 0.0;

  std::vector<std::uint32_t> acc(static_cast<std::size_t>(kThetaBins) * rho_bins, 0);
  std::size_t edge_pixels = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!edges(x, y)) continue;
      ++edge_pixels;
      for (int t = 0; t < kThetaBins; ++t) {
        const auto rho = static_cast<int>(std::lround(x * cos_t[t] + y * sin_t[t]));
        ++acc[static_cast<std::size_t>(t) * rho_bins + (rho + max_rho)];
      }
    }
  }
  if (edge_pixels == 0) throw InvalidArgument("hough_dominant_line on an empty edge map");

  // Row-major scan with a strict comparison gives smallest theta, then
  // smallest rho on ties.
  std::size_t best_cell = 0;
  std::uint32_t best_votes = 0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i] > best_votes) {
      best_votes = acc[i];
      best_cell = i;
    }
  }

  HoughResult r;
  r.threshold = cfg.initial_votes > 0.0 ? cfg.initial_votes : std::max(w, h) / 2.0;
  r.iterations = 1;
  while (best_votes < r.threshold && r.threshold > cfg.min_votes) {
    r.threshold = std::max(cfg.min_votes, r.threshold * cfg.decay);
    ++r.iterations;
  }
  r.below_min_votes = best_votes < r.threshold;
  r.votes = best_votes;
  const int t = static_cast<int>(best_cell / rho_bins);
  const int rho = static_cast<int>(best_cell % rho_bins) - max_rho;
  r.line = {static_cast<double>(rho), t * std::numbers::pi / 180.0};
  return r;
}

double rotation_angle_from_line(const HoughLine& line) {
  // A normal at theta puts the line at (90 - theta) degrees above the
  // horizontal; the correction undoes that modulo quarter turns.
  double corr = line.theta * 180.0 / std::numbers::pi - 90.0;
  corr = std::fmod(corr, 90.0);
  if (corr > 45.0) corr -= 90.0;
  if (corr <= -45.0) corr += 90.0;
  return corr == 0.0 ? 0.0 : corr;
}

SkewEstimate estimate_skew(const Gray8Image& gray, const CannyConfig& canny,
                           const HoughConfig& hough) {
  SkewEstimate est;
  try {
    est.canny = canny_adaptive(gray, canny);
  } catch (const FeaturelessImageError&) {
    est.featureless = true;
    return est;
  }
  est.hough = hough_dominant_line(est.canny.edges, hough);
  est.correction_deg = rotation_angle_from_line(est.hough.line);
  return est;
}

}  // namespace pvinspect::imaging
