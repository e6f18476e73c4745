#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pvinspect/error.hpp"
#include "pvinspect/metrics.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace pvinspect;
using namespace pvinspect::metrics;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, sep)) out.push_back(f);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    if (!line.empty()) rows.push_back(split(line, ','));
  }
  return rows;
}

// Largest CDF gap, checked at every sample value.
double ref_ks(const std::vector<double>& a, const std::vector<double>& b) {
  const auto cdf = [](const std::vector<double>& s, double x) {
    return double(std::count_if(s.begin(), s.end(), [&](double v) { return v <= x; })) / s.size();
  };
  double d = 0;
  for (const auto* s : {&a, &b}) {
    for (double x : *s) d = std::max(d, std::abs(cdf(a, x) - cdf(b, x)));
  }
  return d;
}

struct RandomSet {
  std::vector<EvalImage> images;
};

RandomSet random_set(std::mt19937_64& rng, int n_images) {
  RandomSet s;
  for (int i = 0; i < n_images; ++i) {
    EvalImage img;
    img.id = "i" + std::to_string(i);
    for (int g = 0, n = int(rng() % 5); g < n; ++g) {
      const auto box = pvtest::random_box(rng, 200, 200, 5);
      const std::string label = rng() % 2 ? "hotspot" : "panel";
      img.ground_truth.push_back({box, label});
      if (rng() % 4) {
        const double j = pvtest::uniform(rng, -4, 4);
        img.detections.push_back({clip({box.x_min + j, box.y_min, box.x_max + j, box.y_max}, 200, 200), label,
                                  pvtest::uniform(rng, 0.01, 1)});
      }
    }
    for (int c = 0, n = int(rng() % 3); c < n; ++c) {
      img.detections.push_back({pvtest::random_box(rng, 200, 200, 5), "hotspot", pvtest::uniform(rng, 0.01, 1)});
    }
    s.images.push_back(std::move(img));
  }
  return s;
}

}  // namespace

TEST(Match, DuplicatesBecomeFalsePositives) {
  const std::vector<Annotation> gt{{{0, 0, 10, 10}, "hotspot"}};
  const std::vector<Detection> d{{{0, 0, 10, 10}, "hotspot", 0.9}, {{0, 0, 10, 10}, "hotspot", 0.8},
                                 {{0, 0, 10, 10}, "panel", 0.7}};
  const auto m = match_detections(d, gt, 0.5);
  const auto& h = m.classes.at("hotspot");
  EXPECT_EQ(h.tp, 1u);
  EXPECT_EQ(h.fp, 1u);
  EXPECT_EQ(h.fn, 0u);
  EXPECT_TRUE(h.ranked[0].true_positive);
  EXPECT_EQ(h.ranked[0].gt, 0u);
  EXPECT_FALSE(h.ranked[1].true_positive);
  EXPECT_EQ(m.classes.at("panel").fp, 1u);
  EXPECT_EQ(m.classes.at("panel").n_gt, 0u);
}

TEST(Match, TakesTheBestUnmatchedGroundTruth) {
  // The second detection overlaps the taken G1 most but still matches G2.
  const std::vector<Annotation> gt{{{0, 0, 10, 10}, "hotspot"}, {{5, 0, 15, 10}, "hotspot"}};
  const std::vector<Detection> d{{{2, 0, 12, 10}, "hotspot", 0.9}, {{1, 0, 11, 10}, "hotspot", 0.8}};
  const auto m = match_detections(d, gt, 0.4);
  const auto& h = m.classes.at("hotspot");
  EXPECT_EQ(h.tp, 2u);
  EXPECT_EQ(h.ranked[0].gt, 0u);
  EXPECT_EQ(h.ranked[1].gt, 1u);
  EXPECT_NEAR(h.ranked[1].iou, 60.0 / 140.0, 1e-15);
}

TEST(Match, ThresholdIsInclusive) {
  const std::vector<Annotation> gt{{{0, 0, 10, 10}, "hotspot"}};
  const std::vector<Detection> d{{{0, 0, 10, 20}, "hotspot", 0.9}};
  EXPECT_EQ(match_detections(d, gt, 0.5).classes.at("hotspot").tp, 1u);
  EXPECT_THROW(match_detections(d, gt, 0.0), InvalidArgument);
}

TEST(Prf, Examples) {
  const auto p = prf(3, 1, 2);
  EXPECT_DOUBLE_EQ(p.precision, 0.75);
  EXPECT_DOUBLE_EQ(p.recall, 0.6);
  EXPECT_DOUBLE_EQ(p.f1, 2 * 0.75 * 0.6 / 1.35);
  const auto z = prf(0, 0, 0);
  EXPECT_EQ(z.precision, 0.0);
  EXPECT_EQ(z.recall, 0.0);
  EXPECT_EQ(z.f1, 0.0);
  EXPECT_EQ(prf(0, 4, 0).f1, 0.0);
}

TEST(Ap, Examples) {
  EXPECT_DOUBLE_EQ(average_precision({true, false}, 1), 1.0);
  EXPECT_DOUBLE_EQ(average_precision({false, true}, 1), 0.5);
  EXPECT_NEAR(average_precision({true, false, true}, 2), 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(average_precision({true, false, true}, 2, Interpolation::eleven_point), 28.0 / 33.0, 1e-15);
  EXPECT_EQ(average_precision({false, false}, 0), 0.0);
  EXPECT_THROW(average_precision({true, true}, 0), InvalidArgument);
  EXPECT_THROW(average_precision({true, true}, 1), InvalidArgument);
  const auto c = pr_curve({}, 3);
  EXPECT_TRUE(c.no_detections);
  EXPECT_EQ(c.ap, 0.0);
}

TEST(Ap, MatchesBruteForce) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    std::vector<bool> flags(rng() % 30);
    std::size_t tp = 0;
    for (auto&& f : flags) tp += (f = rng() % 2);
    const std::size_t n_gt = tp + rng() % 5;
    const double ap = average_precision(flags, n_gt);
    EXPECT_NEAR(ap, pvtest::brute_force_ap(flags, n_gt), 1e-12);
    EXPECT_GE(ap, 0.0);
    EXPECT_LE(ap, 1.0);
  }
}

TEST(Ap, CurveIsConsistent) {
  const auto c = pr_curve({true, false, true, true, false}, 4);
  ASSERT_EQ(c.points.size(), 5u);
  EXPECT_DOUBLE_EQ(c.points[3].recall, 0.75);
  EXPECT_DOUBLE_EQ(c.points[3].precision, 0.75);
  for (std::size_t i = 1; i < c.points.size(); ++i) EXPECT_GE(c.points[i].recall, c.points[i - 1].recall);
}

TEST(MeanAp, Examples) {
  const std::vector<double> aps{0.5, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(mean_ap(aps), 0.5);
  EXPECT_THROW(mean_ap(std::vector<double>{}), InvalidArgument);
}

TEST(Ks, Examples) {
  const std::vector<double> a{1, 2, 3}, b{2, 3, 4}, c{10, 11};
  EXPECT_EQ(ks_index(a, a), 0.0);
  EXPECT_EQ(ks_index(a, c), 1.0);
  EXPECT_NEAR(ks_index(a, b), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(ks_index(a, std::vector<double>{}), InvalidArgument);
}

TEST(Ks, PropertiesAgainstOracle) {
  std::mt19937_64 rng(2);
  const auto sample = [&] {
    std::vector<double> s(1 + rng() % 20);
    for (auto& v : s) v = double(rng() % 15);
    return s;
  };
  for (int t = 0; t < 300; ++t) {
    const auto a = sample(), b = sample(), c = sample();
    const double ab = ks_index(a, b);
    EXPECT_NEAR(ab, ref_ks(a, b), 1e-12);
    EXPECT_EQ(ab, ks_index(b, a));
    EXPECT_LE(ab, ks_index(a, c) + ks_index(c, b) + 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(Evaluate, EmptyDetectionsScoreZero) {
  std::vector<EvalImage> images{{"a", {}, {{{0, 0, 10, 10}, "hotspot"}}}};
  const std::vector<double> thr{0.5};
  const auto r = evaluate(images, thr);
  ASSERT_EQ(r.tables.size(), 1u);
  ASSERT_EQ(r.tables[0].rows.size(), 1u);
  EXPECT_EQ(r.tables[0].rows[0].fn, 1u);
  EXPECT_EQ(r.tables[0].rows[0].ap, 0.0);
  EXPECT_EQ(r.tables[0].map, 0.0);
}

TEST(Evaluate, StricterThresholdNeverGainsTruePositives) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto s = random_set(rng, 12);
    const std::vector<double> thrs{0.3, 0.4, 0.5, 0.6, 0.7};
    const auto r = evaluate(s.images, thrs, {"hotspot", "panel"});
    for (std::size_t i = 1; i < r.tables.size(); ++i) {
      for (std::size_t c = 0; c < 2; ++c) {
        EXPECT_LE(r.tables[i].rows[c].tp, r.tables[i - 1].rows[c].tp);
        EXPECT_EQ(r.tables[i].rows[c].tp + r.tables[i].rows[c].fp,
                  r.tables[0].rows[c].tp + r.tables[0].rows[c].fp);
      }
    }
  }
}

TEST(Evaluate, MonotoneConfidenceRescaleChangesNothing) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    auto s = random_set(rng, 10);
    const std::vector<double> thrs{0.5};
    const auto before = format_csv(evaluate(s.images, thrs));
    for (auto& img : s.images)
      for (auto& d : img.detections) d.confidence = d.confidence * d.confidence * 0.5;
    EXPECT_EQ(format_csv(evaluate(s.images, thrs)), before);
  }
}

TEST(Evaluate, F1LiesBetweenPrecisionAndRecall) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto s = random_set(rng, 10);
    const std::vector<double> thrs{0.5};
    const auto r = evaluate(s.images, thrs);
    for (const auto& row : r.tables[0].rows) {
      EXPECT_GE(row.prf.f1, std::min(row.prf.precision, row.prf.recall) - 1e-12);
      EXPECT_LE(row.prf.f1, std::max(row.prf.precision, row.prf.recall) + 1e-12);
    }
  }
}

TEST(EvaluateRun, OrphanDetectionFilesAreAnError) {
  pvtest::TempDir dir;
  pvtest::write_file(dir / "det" / "a.csv", "hotspot,0.5,1,1,5,5\n");
  pvtest::write_file(dir / "det" / "b.csv", "");
  pvtest::write_file(dir / "ann" / "a.xml",
                     "<annotation><filename>a</filename><size><width>10</width><height>10</height></size></annotation>");
  const std::vector<double> thrs{0.5};
  try {
    evaluate_run(dir / "det", dir / "ann", thrs);
    FAIL() << "no exception";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("b.csv"), std::string::npos);
  }
}

TEST(EvaluateRun, MatchesIndependentReference) {
  const std::filesystem::path golden = PVTEST_REFERENCE_DIR "/golden";
  const std::vector<double> thrs{0.3, 0.5, 0.7};
  const auto result = evaluate_run(golden / "detections", golden / "annotations", thrs);
  const auto got = csv_rows(format_csv(result));
  const auto want = csv_rows(pvtest::read_file(golden / "expected.csv"));
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    ASSERT_EQ(got[i].size(), 9u);
    for (std::size_t f = 0; f < 5; ++f) EXPECT_EQ(got[i][f], want[i][f]) << "row " << i;
    for (std::size_t f = 5; f < 9; ++f) {
      if (want[i][f].empty()) continue;
      EXPECT_NEAR(std::stod(got[i][f]), std::stod(want[i][f]), 5e-7) << "row " << i << " field " << f;
    }
  }
  // Full precision for the mAP values.
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_NEAR(result.tables[t].map, std::stod(want[4 * t + 3][8]), 1e-11);
  }
}

TEST(Format, CsvColumnsAndPercent) {
  std::vector<EvalImage> images{{"a", {{{0, 0, 10, 10}, "hotspot", 0.9}}, {{{0, 0, 10, 10}, "hotspot"}}}};
  const std::vector<double> thrs{0.5};
  EXPECT_EQ(format_csv(evaluate(images, thrs)),
            "class,iou,tp,fp,fn,prec,rec,f1,ap\n"
            "hotspot,0.50,1,0,0,1.000000,1.000000,1.000000,1.000000\n"
            "mAP,0.50,,,,,,,1.000000\n");
  EXPECT_EQ(format_percent(913.0 / 926.0), "98.59");
  EXPECT_EQ(format_percent(0.2722), "27.22");
  EXPECT_EQ(format_percent(1.0), "100.00");
  EXPECT_EQ(format_percent(0.0), "0.00");
  EXPECT_NE(format_table(evaluate(images, thrs)).find("100.00"), std::string::npos);
}
