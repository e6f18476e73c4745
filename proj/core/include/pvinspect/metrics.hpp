#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pvinspect/box.hpp"

namespace pvinspect::metrics {

struct RankedDetection {
  Detection detection;
  /// Index of the matched ground truth within its image.
  std::optional<std::size_t> gt;
  double iou = 0.0;
  bool true_positive = false;
};

struct ClassMatch {
  /// Detections in decreasing confidence.
  std::vector<RankedDetection> ranked;
  std::size_t n_gt = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct MatchResult {
  double iou_thr = 0.5;
  std::map<std::string, ClassMatch> classes;
};

/// VOC matching within one image: per class, detections in decreasing
/// confidence each take the unmatched ground truth of highest IoU when that
/// IoU reaches `iou_thr`.
MatchResult match_detections(std::span<const Detection> dets, std::span<const Annotation> gts,
                             double iou_thr);

/// Adds the per-image result `image` to `total`, keeping each class ranking
/// sorted by confidence across images.
void accumulate(MatchResult& total, const MatchResult& image);

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// 0/0 ratios are 0.
PRF prf(std::size_t tp, std::size_t fp, std::size_t fn);
PRF prf(const ClassMatch& m);

enum class Interpolation { all_point, eleven_point };

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct PRCurve {
  std::vector<PRPoint> points;
  double ap = 0.0;
  /// Ground truths exist but nothing was detected.
  bool no_detections = false;
};

/// Sweep over a confidence-ranked list of TP/FP flags. AP integrates the
/// monotone precision envelope over recall (all-point) or samples it at
/// recall 0, 0.1, ..., 1 (11-point). A class without ground truth has AP 0.
PRCurve pr_curve(const std::vector<bool>& ranked_tp, std::size_t n_gt,
                 Interpolation mode = Interpolation::all_point);
double average_precision(const std::vector<bool>& ranked_tp, std::size_t n_gt,
                         Interpolation mode = Interpolation::all_point);
double average_precision(const ClassMatch& m, Interpolation mode = Interpolation::all_point);

/// Arithmetic mean. Throws InvalidArgument on an empty list.
double mean_ap(std::span<const double> aps);

/// Largest distance between the two empirical CDFs. Throws on an empty sample.
double ks_index(std::span<const double> a, std::span<const double> b);

struct ClassRow {
  std::string label;
  double iou_thr = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  PRF prf;
  double ap = 0.0;
};

struct EvalTable {
  double iou_thr = 0.0;
  std::vector<ClassRow> rows;
  double map = 0.0;
};

struct EvalResult {
  std::vector<EvalTable> tables;
};

struct EvalImage {
  std::string id;
  std::vector<Detection> detections;
  std::vector<Annotation> ground_truth;
};

/// One table per threshold. Rows cover `classes`, or every label seen in the
/// ground truth and detections when `classes` is empty; mAP averages the rows.
EvalResult evaluate(std::span<const EvalImage> images, std::span<const double> iou_thrs,
                    std::vector<std::string> classes = {},
                    Interpolation mode = Interpolation::all_point);

/// Pairs `<stem>.csv` in `detections_dir` with `<stem>.xml` in
/// `annotations_dir`. Annotated images without a detection file count as
/// empty detections; detection files without annotation are an error that
/// lists them.
EvalResult evaluate_run(const std::filesystem::path& detections_dir,
                        const std::filesystem::path& annotations_dir,
                        std::span<const double> iou_thrs, std::vector<std::string> classes = {},
                        Interpolation mode = Interpolation::all_point);

/// Percentage with two decimals, truncated rather than rounded, so 913/926
/// prints as 98.59.
std::string format_percent(double fraction);

/// Columns class,iou,tp,fp,fn,prec,rec,f1,ap with one mAP row per threshold.
std::string format_csv(const EvalResult& result);
/// Aligned text table with percentages.
std::string format_table(const EvalResult& result);

}  // namespace pvinspect::metrics
