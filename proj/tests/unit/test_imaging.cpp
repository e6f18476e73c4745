#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

#include "pvinspect/error.hpp"
#include "pvinspect/image_io.hpp"
#include "pvinspect/imaging.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace pvinspect;
using namespace pvinspect::imaging;

namespace {

template <typename Pixel>
Raster<Pixel> random_raster(std::mt19937_64& rng, int w, int h, int max_value) {
  Raster<Pixel> r(w, h);
  for (auto& p : r.pixels()) p = static_cast<Pixel>(rng() % (max_value + 1));
  return r;
}

Gray8Image rectangle_image(int w, int h, BoundingBox rect, std::uint8_t inside, std::uint8_t outside) {
  Gray8Image img(w, h, outside);
  for (int y = static_cast<int>(rect.y_min); y < static_cast<int>(rect.y_max); ++y) {
    for (int x = static_cast<int>(rect.x_min); x < static_cast<int>(rect.x_max); ++x) img(x, y) = inside;
  }
  return img;
}

// Distance in pixels from (x, y) to the nearest boundary pixel of `r`.
double distance_to_perimeter(int x, int y, const BoundingBox& r) {
  const double cx = x + 0.5;
  const double cy = y + 0.5;
  const bool inside_x = cx >= r.x_min - 1 && cx <= r.x_max + 1;
  const bool inside_y = cy >= r.y_min - 1 && cy <= r.y_max + 1;
  double d = 1e9;
  if (inside_y) d = std::min({d, std::abs(cx - r.x_min), std::abs(cx - r.x_max)});
  if (inside_x) d = std::min({d, std::abs(cy - r.y_min), std::abs(cy - r.y_max)});
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// Radiometry and color

TEST(Normalize, ConstantRasterIsAllZero) {
  const auto out = normalize_radiometric(Gray16Image(4, 3, 5000));
  EXPECT_TRUE(std::all_of(out.pixels().begin(), out.pixels().end(), [](auto v) { return v == 0; }));
}

TEST(Normalize, ExtremesMapToBounds) {
  const auto two = normalize_radiometric(Gray16Image(2, 1, std::vector<std::uint16_t>{1000, 3000}));
  EXPECT_EQ(two(0, 0), 0);
  EXPECT_EQ(two(1, 0), 255);
  const auto three = normalize_radiometric(Gray16Image(3, 1, std::vector<std::uint16_t>{1000, 2000, 3000}));
  EXPECT_EQ(three(1, 0), 128);
}

TEST(Normalize, MatchesFormulaAndAttainsBothBounds) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto raw = random_raster<std::uint16_t>(rng, 17, 11, 65535);
    const auto out = normalize_radiometric(raw);
    const auto [lo, hi] = std::minmax_element(raw.pixels().begin(), raw.pixels().end());
    for (std::size_t i = 0; i < raw.pixel_count(); ++i) {
      const double expect = std::round(255.0 * (raw.pixels()[i] - *lo) / double(*hi - *lo));
      EXPECT_EQ(out.pixels()[i], expect);
    }
    EXPECT_EQ(*std::min_element(out.pixels().begin(), out.pixels().end()), 0);
    EXPECT_EQ(*std::max_element(out.pixels().begin(), out.pixels().end()), 255);
  }
}

TEST(Palette, EndpointsAreBlueAndRed) {
  const auto& p = rainbow_palette();
  EXPECT_EQ(p[0], (Rgb8{0, 0, 255}));
  EXPECT_EQ(p[255], (Rgb8{255, 0, 0}));
}

TEST(Palette, AllEntriesDistinct) {
  const auto& p = rainbow_palette();
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& c : p) seen.insert({c.r, c.g, c.b});
  EXPECT_EQ(seen.size(), 256u);
}

TEST(Palette, ShippedAssetMatchesBuiltin) {
  EXPECT_EQ(load_palette_csv(std::filesystem::path(PVINSPECT_ASSET_DIR) / "rainbow_palette.csv"), rainbow_palette());
}

TEST(Palette, CsvRoundTripAndMalformedFile) {
  pvtest::TempDir dir;
  write_palette_csv(rainbow_palette(), dir / "p.csv");
  EXPECT_EQ(load_palette_csv(dir / "p.csv"), rainbow_palette());
  pvtest::write_file(dir / "bad.csv", "0,0,255\n1,2\n");
  EXPECT_THROW(load_palette_csv(dir / "bad.csv"), ParseError);
}

TEST(FalseColor, LooksUpEveryLevel) {
  Gray8Image g(256, 1);
  for (int i = 0; i < 256; ++i) g(i, 0) = static_cast<std::uint8_t>(i);
  const auto rgb = false_color(g);
  for (int i = 0; i < 256; ++i) EXPECT_EQ(rgb(i, 0), rainbow_palette()[i]);
}

TEST(Temperature, AffineCalibration) {
  EXPECT_NEAR(temperature_of(7500, {0.04, -273.15}), 26.85, 1e-9);
  EXPECT_DOUBLE_EQ(temperature_of(42, {1.0, 0.0}), 42.0);
  EXPECT_LT(temperature_of(100, {}), temperature_of(101, {}));
  EXPECT_THROW(temperature_of(1, {NAN, 0.0}), InvalidArgument);
  EXPECT_THROW(temperature_of(1, {0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(validate(Calibration{0.04, INFINITY}), InvalidArgument);
}

TEST(Temperature, MapAgreesWithScalar) {
  std::mt19937_64 rng(2);
  const auto raw = random_raster<std::uint16_t>(rng, 9, 7, 65535);
  const auto t = temperature_map(raw, {});
  for (std::size_t i = 0; i < raw.pixel_count(); ++i) {
    EXPECT_DOUBLE_EQ(t.pixels()[i], temperature_of(raw.pixels()[i], {}));
  }
}

TEST(ToGray8, LumaAndPassThrough) {
  RgbImage rgb(2, 1);
  rgb(0, 0) = {255, 255, 255};
  rgb(1, 0) = {255, 0, 0};
  const auto g = to_gray8(Image{rgb});
  EXPECT_EQ(g(0, 0), 255);
  EXPECT_EQ(g(1, 0), 76);  // 0.299 * 255
  const Gray8Image gray(3, 3, 17);
  EXPECT_EQ(to_gray8(Image{gray}), gray);
  const auto n = to_gray8(Image{Gray16Image(2, 1, std::vector<std::uint16_t>{10, 20})});
  EXPECT_EQ(n(0, 0), 0);
  EXPECT_EQ(n(1, 0), 255);
}

// ---------------------------------------------------------------------------
// Filtering

TEST(Gaussian, ConstantIsFixedPoint) {
  EXPECT_EQ(gaussian_5x5(Gray8Image(8, 6, 77)), Gray8Image(8, 6, 77));
  EXPECT_EQ(gaussian_5x5(Gray16Image(5, 5, 40000)), Gray16Image(5, 5, 40000));
}

TEST(Gaussian, ImpulseGivesBinomialOuterProduct) {
  FloatImage img(9, 9, 0.0f);
  img(4, 4) = 256.0f;
  const auto out = gaussian_5x5(img);
  const int k[5] = {1, 4, 6, 4, 1};
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) {
      const int dx = x - 4 + 2;
      const int dy = y - 4 + 2;
      const double expect = (dx >= 0 && dx < 5 && dy >= 0 && dy < 5) ? k[dx] * k[dy] : 0.0;
      EXPECT_FLOAT_EQ(out(x, y), static_cast<float>(expect)) << x << "," << y;
    }
  }
}

TEST(Gaussian, PreservesSumOfInteriorSignal) {
  std::mt19937_64 rng(3);
  FloatImage img(20, 20, 0.0f);
  double sum = 0.0;
  for (int y = 4; y < 16; ++y) {
    for (int x = 4; x < 16; ++x) sum += img(x, y) = static_cast<float>(rng() % 100);
  }
  const auto out = gaussian_5x5(img);
  double s = 0.0;
  for (auto v : out.pixels()) s += v;
  EXPECT_NEAR(s, sum, 1e-2);
}

TEST(Gaussian, RejectsSmallImages) {
  EXPECT_THROW(gaussian_5x5(Gray8Image(4, 9)), InvalidArgument);
}

TEST(Sobel, ConstantHasZeroGradient) {
  const auto g = sobel_gradient(FloatImage(6, 6, 9.0f));
  for (auto v : g.magnitude.pixels()) EXPECT_EQ(v, 0.0f);
}

TEST(Sobel, VerticalStepEdge) {
  FloatImage img(10, 6, 0.0f);
  for (int y = 0; y < 6; ++y) {
    for (int x = 5; x < 10; ++x) img(x, y) = 255.0f;
  }
  const auto g = sobel_gradient(img);
  for (int y = 1; y < 5; ++y) {
    EXPECT_FLOAT_EQ(g.magnitude(4, y), 1020.0f);
    EXPECT_FLOAT_EQ(g.magnitude(5, y), 1020.0f);
    EXPECT_EQ(g.direction(4, y), Direction::deg0);
    EXPECT_FLOAT_EQ(g.magnitude(2, y), 0.0f);
  }
}

TEST(Sobel, QuarterTurnSwapsComponentsAndKeepsMagnitude) {
  std::mt19937_64 rng(4);
  const auto img = random_raster<std::uint8_t>(rng, 13, 9, 255);
  const auto rot = rotate_image(img, 90.0).image;
  const auto g = sobel_gradient(to_float(img));
  const auto gr = sobel_gradient(to_float(rot));
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 13; ++x) {
      // (x, y) lands at (y, W - 1 - x).
      const int rx = y;
      const int ry = 13 - 1 - x;
      EXPECT_FLOAT_EQ(gr.magnitude(rx, ry), g.magnitude(x, y));
      EXPECT_FLOAT_EQ(std::abs(gr.gx(rx, ry)), std::abs(g.gy(x, y)));
      EXPECT_FLOAT_EQ(std::abs(gr.gy(rx, ry)), std::abs(g.gx(x, y)));
    }
  }
}

TEST(Sobel, DirectionQuantization) {
  // A diagonal ramp increasing along x + y has its gradient at 45 degrees.
  FloatImage img(7, 7);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 7; ++x) img(x, y) = static_cast<float>(10 * (x + y));
  }
  EXPECT_EQ(sobel_gradient(img).direction(3, 3), Direction::deg45);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 7; ++x) img(x, y) = static_cast<float>(10 * y);
  }
  EXPECT_EQ(sobel_gradient(img).direction(3, 3), Direction::deg90);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 7; ++x) img(x, y) = static_cast<float>(10 * (y - x));
  }
  EXPECT_EQ(sobel_gradient(img).direction(3, 3), Direction::deg135);
}

// ---------------------------------------------------------------------------
// Canny

TEST(Canny, BlankImageIsFeatureless) {
  EXPECT_THROW(canny_adaptive(Gray8Image(64, 64, 0)), FeaturelessImageError);
}

TEST(Canny, RejectsInvalidConfig) {
  EXPECT_THROW(validate(CannyConfig{500, 400, 50, 1000, -100}), InvalidArgument);
  EXPECT_THROW(validate(CannyConfig{450, 550, 0, 1000, -100}), InvalidArgument);
  EXPECT_THROW(validate(CannyConfig{450, 550, 50, 0, -100}), InvalidArgument);
}

TEST(Canny, WhiteRectangleGivesItsPerimeterAtDefaults) {
  const BoundingBox rect{50, 50, 550, 350};
  const auto img = rectangle_image(600, 400, rect, 255, 0);
  const auto r = canny_adaptive(img);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.g_max, 550.0);
  // Every edge lies within the 1 px band around the perimeter.
  std::size_t on_band = 0;
  for (int y = 0; y < 400; ++y) {
    for (int x = 0; x < 600; ++x) {
      if (!r.edges(x, y)) continue;
      EXPECT_LE(distance_to_perimeter(x, y, rect), 1.5) << x << "," << y;
      ++on_band;
    }
  }
  EXPECT_EQ(on_band, r.edge_count);
  // Each perimeter position has an edge pixel in its band.
  for (int x = 52; x < 548; ++x) {
    EXPECT_TRUE(r.edges(x, 49) || r.edges(x, 50)) << x;
    EXPECT_TRUE(r.edges(x, 349) || r.edges(x, 350)) << x;
  }
  for (int y = 52; y < 348; ++y) {
    EXPECT_TRUE(r.edges(49, y) || r.edges(50, y)) << y;
    EXPECT_TRUE(r.edges(549, y) || r.edges(550, y)) << y;
  }
}

TEST(Canny, LowContrastRelaxesThresholds) {
  const auto img = rectangle_image(600, 400, {50, 50, 550, 350}, 120, 100);
  const auto r = canny_adaptive(img);
  EXPECT_GT(r.iterations, 1);
  EXPECT_LT(r.g_max, 550.0);
  EXPECT_GE(r.edge_count, 1000u);
}

TEST(Canny, ThresholdsDecreaseStrictlyAndLoopIsBounded) {
  std::mt19937_64 rng(5);
  const CannyConfig cfg;
  const int bound = static_cast<int>((cfg.g_min - cfg.floor) / cfg.step) + 1;
  for (int t = 0; t < 10; ++t) {
    const int contrast = 5 + static_cast<int>(rng() % 120);
    const auto img = rectangle_image(300, 200, pvtest::random_box(rng, 300, 200, 40), 100 + contrast, 100);
    try {
      const auto r = canny_adaptive(img, cfg);
      EXPECT_LE(r.iterations, bound);
      EXPECT_EQ(r.g_min_history.size(), static_cast<std::size_t>(r.iterations));
      for (std::size_t i = 1; i < r.g_min_history.size(); ++i) {
        EXPECT_LT(r.g_min_history[i], r.g_min_history[i - 1]);
      }
    } catch (const FeaturelessImageError&) {
    }
  }
}

TEST(Canny, EdgesOnlyWhereMagnitudeExceedsFinalLowThreshold) {
  std::mt19937_64 rng(6);
  const auto img = random_raster<std::uint8_t>(rng, 80, 60, 255);
  const auto r = canny_adaptive(img);
  const auto c = edge_candidates(to_float(img));
  for (int y = 0; y < 60; ++y) {
    for (int x = 0; x < 80; ++x) {
      if (r.edges(x, y)) {
        EXPECT_GT(c.magnitude(x, y), r.g_min);
        EXPECT_TRUE(c.is_peak(x, y));
      }
    }
  }
}

TEST(Canny, HysteresisFollowsEightConnectedWeakPeaks) {
  EdgeCandidates c{FloatImage(5, 5, 0.0f), Raster<std::uint8_t>(5, 5, 0)};
  // A strong seed, a diagonal weak neighbor, and an isolated weak peak.
  c.magnitude(1, 1) = 100;
  c.magnitude(2, 2) = 30;
  c.magnitude(4, 0) = 30;
  c.is_peak(1, 1) = c.is_peak(2, 2) = c.is_peak(4, 0) = 1;
  const auto e = hysteresis(c, 20, 50);
  EXPECT_EQ(e(1, 1), 1);
  EXPECT_EQ(e(2, 2), 1);
  EXPECT_EQ(e(4, 0), 0);
  EXPECT_EQ(count_edges(e), 2u);
}

TEST(Elbow, LinearSequencePicksFirstInteriorPoint) {
  const std::vector<double> v{0, 1, 2, 3, 4};
  EXPECT_EQ(elbow_index(v), 1u);
}

TEST(Elbow, KneeExample) {
  const std::vector<double> v{0, 1, 2, 100, 101};
  EXPECT_EQ(elbow_index(v), 2u);
  const std::vector<std::size_t> counts{0, 1, 2, 100, 101};
  EXPECT_EQ(elbow_n_thr(counts), 2u);
}

TEST(Elbow, MatchesPerpendicularDistanceOracle) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(3 + rng() % 10);
    for (auto& x : v) x = static_cast<double>(rng() % 1000);
    std::sort(v.begin(), v.end());
    const double x0 = 0, y0 = v.front(), x1 = double(v.size() - 1), y1 = v.back();
    const double len = std::hypot(x1 - x0, y1 - y0);
    std::size_t best = 1;
    double best_d = -1;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      const double d = std::abs((y1 - y0) * (double(i) - x0) - (x1 - x0) * (v[i] - y0)) / len;
      if (d > best_d + 1e-9) best_d = d, best = i;
    }
    EXPECT_EQ(elbow_index(v), best);
  }
}

TEST(Elbow, RejectsShortOrUnsortedInput) {
  EXPECT_THROW(elbow_index(std::vector<double>{1, 2}), InvalidArgument);
  EXPECT_THROW(elbow_n_thr(std::vector<std::size_t>{3, 2, 1}), InvalidArgument);
}

// ---------------------------------------------------------------------------
// Hough

TEST(Hough, VerticalColumn) {
  EdgeMap e(100, 80, 0);
  for (int y = 0; y < 80; ++y) e(50, y) = 1;
  const auto r = hough_dominant_line(e);
  EXPECT_EQ(r.line.theta, 0.0);
  EXPECT_EQ(r.line.rho, 50.0);
  EXPECT_EQ(r.votes, 80u);
}

TEST(Hough, HorizontalRow) {
  EdgeMap e(100, 80, 0);
  for (int x = 0; x < 100; ++x) e(x, 30) = 1;
  const auto r = hough_dominant_line(e);
  EXPECT_NEAR(r.line.theta, std::numbers::pi / 2, 1e-12);
  EXPECT_EQ(r.line.rho, 30.0);
}

TEST(Hough, LongerParallelLineWins) {
  EdgeMap e(120, 120, 0);
  for (int y = 10; y < 40; ++y) e(20, y) = 1;
  for (int y = 10; y < 100; ++y) e(80, y) = 1;
  EXPECT_EQ(hough_dominant_line(e).line.rho, 80.0);
}

TEST(Hough, RecoversRandomLines) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    const int theta_deg = static_cast<int>(rng() % 180);
    const double th = theta_deg * std::numbers::pi / 180.0;
    const double rho = pvtest::uniform(rng, 20, 60);
    EdgeMap e(160, 160, 0);
    // Rasterize x cos + y sin = rho by stepping along the line direction.
    const double px = rho * std::cos(th);
    const double py = rho * std::sin(th);
    for (double s = -300; s <= 300; s += 0.25) {
      const int x = static_cast<int>(std::lround(px - s * std::sin(th)));
      const int y = static_cast<int>(std::lround(py + s * std::cos(th)));
      if (e.contains(x, y)) e(x, y) = 1;
    }
    if (count_edges(e) < 40) continue;
    const auto r = hough_dominant_line(e);
    double dtheta = std::abs(r.line.theta - th) * 180.0 / std::numbers::pi;
    double drho = std::abs(r.line.rho - rho);
    if (dtheta > 90) {
      // theta near 0 and 180 describe the same line with rho negated.
      dtheta = 180 - dtheta;
      drho = std::abs(r.line.rho + rho);
    }
    EXPECT_LE(dtheta, 1.0 + 1e-9) << theta_deg;
    EXPECT_LE(drho, 1.0) << theta_deg;
  }
}

TEST(Hough, EmptyEdgeMapThrows) {
  EXPECT_THROW(hough_dominant_line(EdgeMap(10, 10, 0)), InvalidArgument);
}

TEST(Hough, ThresholdScheduleAndFloorFlag) {
  EdgeMap e(200, 100, 0);
  for (int x = 0; x < 5; ++x) e(x, 3) = 1;
  const auto r = hough_dominant_line(e);
  EXPECT_TRUE(r.below_min_votes);
  EXPECT_EQ(r.threshold, 10.0);
  EdgeMap full(200, 100, 0);
  for (int x = 0; x < 200; ++x) full(x, 3) = 1;
  const auto f = hough_dominant_line(full);
  EXPECT_FALSE(f.below_min_votes);
  EXPECT_EQ(f.iterations, 1);
  EXPECT_EQ(f.threshold, 100.0);
}

TEST(RotationAngle, NearestAxisCorrection) {
  const auto line_at = [](double deg_above_horizontal) {
    // The normal of a line rising at `deg` (on screen) sits at 90 - deg.
    return HoughLine{0.0, (90.0 - deg_above_horizontal) * std::numbers::pi / 180.0};
  };
  EXPECT_EQ(rotation_angle_from_line({0.0, 0.0}), 0.0);
  EXPECT_EQ(rotation_angle_from_line({0.0, std::numbers::pi / 2}), 0.0);
  EXPECT_NEAR(rotation_angle_from_line(line_at(10)), -10.0, 1e-9);
  EXPECT_NEAR(rotation_angle_from_line(line_at(80)), 10.0, 1e-9);
  for (int d = 0; d < 180; ++d) {
    const double c = rotation_angle_from_line({0.0, d * std::numbers::pi / 180.0});
    EXPECT_GT(c, -45.0);
    EXPECT_LE(c, 45.0);
  }
}

TEST(Skew, PanelGridCorrectionWithinTolerance) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const double phi = pvtest::uniform(rng, -30, 30);
    const auto est = estimate_skew(pvtest::make_panel_grid(phi, rng()));
    EXPECT_FALSE(est.featureless);
    EXPECT_LE(std::abs(est.correction_deg + phi), 1.5) << phi;
  }
}

TEST(Skew, FeaturelessImageGivesZero) {
  const auto est = estimate_skew(Gray8Image(50, 50, 128));
  EXPECT_TRUE(est.featureless);
  EXPECT_EQ(est.correction_deg, 0.0);
}

// ---------------------------------------------------------------------------
// Geometry on rasters

TEST(Rotate, ZeroIsIdentity) {
  std::mt19937_64 rng(10);
  const auto img = random_raster<std::uint8_t>(rng, 9, 5, 255);
  const auto r = rotate_image(img, 0.0);
  EXPECT_EQ(r.image, img);
  EXPECT_TRUE(r.transform.is_identity());
}

TEST(Rotate, QuarterTurnPermutesPixels) {
  std::mt19937_64 rng(11);
  const int W = 7, H = 4;
  const auto img = random_raster<std::uint16_t>(rng, W, H, 65535);
  const auto r = rotate_image(img, 90.0);
  ASSERT_EQ(r.image.size(), (FrameSize{H, W}));
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) EXPECT_EQ(r.image(y, W - 1 - x), img(x, y));
  }
}

TEST(Rotate, FourQuarterTurnsAreIdentity) {
  std::mt19937_64 rng(12);
  RgbImage img(11, 6);
  for (auto& p : img.pixels()) p = {std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng())};
  auto r = img;
  for (int i = 0; i < 4; ++i) r = rotate_image(r, 90.0).image;
  EXPECT_EQ(r, img);
}

TEST(Rotate, ForwardAndBackRecoversCenter) {
  std::mt19937_64 rng(13);
  // Smooth content keeps the bilinear error small, as with real imagery.
  Gray8Image img(120, 90);
  const double fx = pvtest::uniform(rng, 0.05, 0.15), fy = pvtest::uniform(rng, 0.05, 0.15);
  for (int y = 0; y < 90; ++y) {
    for (int x = 0; x < 120; ++x) img(x, y) = static_cast<std::uint8_t>(127 + 100 * std::sin(fx * x) * std::cos(fy * y));
  }
  for (double angle : {-30.0, -7.5, 12.0, 25.0}) {
    const auto fwd = rotate_image(img, angle);
    const auto back = warp(fwd.image, invert(fwd.transform));
    ASSERT_EQ(back.size(), img.size());
    double diff = 0.0;
    int n = 0;
    for (int y = 90 / 4; y < 3 * 90 / 4; ++y) {
      for (int x = 120 / 4; x < 3 * 120 / 4; ++x, ++n) diff += std::abs(int(back(x, y)) - int(img(x, y)));
    }
    EXPECT_LT(diff / n, 2.0) << angle;
  }
}

TEST(Rotate, ArbitraryAnglePadsBlackAndExpandsCanvas) {
  const auto r = rotate_image(Gray8Image(100, 60, 200), 30.0);
  EXPECT_EQ(r.image.size(), rotated_canvas({100, 60}, 30.0));
  EXPECT_EQ(r.image(0, 0), 0);
  EXPECT_EQ(r.image(r.image.width() / 2, r.image.height() / 2), 200);
}

TEST(Flip, IsAnInvolution) {
  std::mt19937_64 rng(14);
  const auto img = random_raster<std::uint8_t>(rng, 8, 5, 255);
  for (auto [h, v] : {std::pair{true, false}, {false, true}, {true, true}}) {
    const auto f = flip_image(img, h, v);
    EXPECT_NE(f, img);
    EXPECT_EQ(flip_image(f, h, v), img);
  }
  EXPECT_EQ(flip_image(img, true, false)(0, 0), img(7, 0));
}

TEST(Resize, DoublingAConstantAndCropping) {
  const auto r = resize_bilinear(Gray8Image(5, 5, 90), 10, 10);
  EXPECT_EQ(r, Gray8Image(10, 10, 90));
  Gray8Image img(6, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) img(x, y) = static_cast<std::uint8_t>(10 * y + x);
  }
  const auto c = crop(img, 2, 1, 3, 2);
  EXPECT_EQ(c.size(), (FrameSize{3, 2}));
  EXPECT_EQ(c(0, 0), 12);
  EXPECT_EQ(c(2, 1), 24);
  EXPECT_THROW(crop(img, 5, 0, 3, 2), InvalidArgument);
}

// ---------------------------------------------------------------------------
// File I/O

TEST(ImageIo, RoundTripsEveryKind) {
  pvtest::TempDir dir;
  std::mt19937_64 rng(15);
  const auto g16 = random_raster<std::uint16_t>(rng, 31, 17, 65535);
  const auto g8 = random_raster<std::uint8_t>(rng, 31, 17, 255);
  RgbImage rgb(31, 17);
  for (auto& p : rgb.pixels()) p = {std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng())};

  io::write_image(dir / "a.tiff", Image{g16});
  io::write_image(dir / "b.png", Image{g16});
  io::write_image(dir / "c.png", Image{g8});
  io::write_image(dir / "d.png", Image{rgb});
  EXPECT_EQ(std::get<Gray16Image>(io::read_image(dir / "a.tiff")), g16);
  EXPECT_EQ(std::get<Gray16Image>(io::read_image(dir / "b.png")), g16);
  EXPECT_EQ(std::get<Gray8Image>(io::read_image(dir / "c.png")), g8);
  EXPECT_EQ(std::get<RgbImage>(io::read_image(dir / "d.png")), rgb);
}

TEST(ImageIo, MissingFileAndUnsupportedDepth) {
  pvtest::TempDir dir;
  EXPECT_THROW(io::read_image(dir / "none.png"), Error);
  EXPECT_THROW(io::write_image(dir / "x.jpg", Image{Gray16Image(4, 4)}), Error);
}
