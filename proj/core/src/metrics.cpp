#include "pvinspect/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <set>

#include "pvinspect/dataset.hpp"
#include "pvinspect/error.hpp"

namespace pvinspect::metrics {
namespace {

bool rank_order(const RankedDetection& a, const RankedDetection& b) {
  return ranks_before(a.detection, b.detection);
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MatchResult match_detections(std::span<const Detection> dets, std::span<const Annotation> gts,
                             double iou_thr) {
  if (!(iou_thr > 0.0 && iou_thr <= 1.0)) throw InvalidArgument("IoU threshold must lie in (0, 1]");
  MatchResult out;
  out.iou_thr = iou_thr;
  std::map<std::string, std::vector<std::size_t>> gt_by_class;
  for (std::size_t i = 0; i < gts.size(); ++i) gt_by_class[gts[i].class_label].push_back(i);
  for (const auto& [label, idx] : gt_by_class) out.classes[label].n_gt = idx.size();

  std::vector<Detection> sorted(dets.begin(), dets.end());
  std::stable_sort(sorted.begin(), sorted.end(), ranks_before);
  std::vector<bool> taken(gts.size(), false);
  for (auto& d : sorted) {
    ClassMatch& cm = out.classes[d.class_label];
    RankedDetection r{std::move(d), std::nullopt, 0.0, false};
    double best = -1.0;
    std::optional<std::size_t> best_gt;
    if (const auto it = gt_by_class.find(r.detection.class_label); it != gt_by_class.end()) {
      for (std::size_t g : it->second) {
        if (taken[g]) continue;
        const double v = iou(r.detection.box, gts[g].box);
        if (v > best) {
          best = v;
          best_gt = g;
        }
      }
    }
    if (best_gt && best >= iou_thr) {
      taken[*best_gt] = true;
      r.gt = best_gt;
      r.iou = best;
      r.true_positive = true;
      ++cm.tp;
    } else {
      r.iou = std::max(best, 0.0);
      ++cm.fp;
    }
    cm.ranked.push_back(std::move(r));
  }
  for (auto& [label, cm] : out.classes) cm.fn = cm.n_gt - cm.tp;
  return out;
}

void accumulate(MatchResult& total, const MatchResult& image) {
  total.iou_thr = image.iou_thr;
  for (const auto& [label, cm] : image.classes) {
    ClassMatch& t = total.classes[label];
    std::vector<RankedDetection> merged;
    merged.reserve(t.ranked.size() + cm.ranked.size());
    std::merge(t.ranked.begin(), t.ranked.end(), cm.ranked.begin(), cm.ranked.end(),
               std::back_inserter(merged), rank_order);
    t.ranked = std::move(merged);
    t.n_gt += cm.n_gt;
    t.tp += cm.tp;
    t.fp += cm.fp;
    t.fn += cm.fn;
  }
}

PRF prf(std::size_t tp, std::size_t fp, std::size_t fn) {
  PRF r;
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  const double s = r.precision + r.recall;
  r.f1 = s > 0.0 ? 2.0 * r.precision * r.recall / s : 0.0;
  return r;
}

PRF prf(const ClassMatch& m) { return prf(m.tp, m.fp, m.fn); }

PRCurve pr_curve(const std::vector<bool>& ranked_tp, std::size_t n_gt, Interpolation mode) {
  PRCurve c;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < ranked_tp.size(); ++i) {
    if (ranked_tp[i]) ++tp;
    c.points.push_back({ratio(tp, n_gt), ratio(tp, i + 1)});
  }
  if (tp > n_gt) throw InvalidArgument("more true positives than ground truths");
  c.no_detections = n_gt > 0 && ranked_tp.empty();
  if (n_gt == 0 || ranked_tp.empty()) return c;

  std::vector<double> envelope(c.points.size());
  double running = 0.0;
  for (std::size_t i = c.points.size(); i-- > 0;) {
    running = std::max(running, c.points[i].precision);
    envelope[i] = running;
  }
  if (mode == Interpolation::all_point) {
    double prev = 0.0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      c.ap += (c.points[i].recall - prev) * envelope[i];
      prev = c.points[i].recall;
    }
  } else {
    for (int k = 0; k <= 10; ++k) {
      const double r = k / 10.0;
      double p = 0.0;
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (c.points[i].recall >= r - 1e-12) {
          p = envelope[i];
          break;
        }
      }
      c.ap += p / 11.0;
    }
  }
  c.ap = std::clamp(c.ap, 0.0, 1.0);
  return c;
}

double average_precision(const std::vector<bool>& ranked_tp, std::size_t n_gt, Interpolation mode) {
  return pr_curve(ranked_tp, n_gt, mode).ap;
}

double average_precision(const ClassMatch& m, Interpolation mode) {
  std::vector<bool> flags;
  flags.reserve(m.ranked.size());
  for (const auto& r : m.ranked) flags.push_back(r.true_positive);
  return average_precision(flags, m.n_gt, mode);
}

double mean_ap(std::span<const double> aps) {
  if (aps.empty()) throw InvalidArgument("mAP needs at least one class");
  double s = 0.0;
  for (double a : aps) s += a;
  return s / static_cast<double>(aps.size());
}

double ks_index(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS index needs two non-empty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double x;
    if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
      x = sa[i];
    } else {
      x = sb[j];
    }
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(ratio(i, sa.size()) - ratio(j, sb.size())));
  }
  return d;
}

EvalResult evaluate(std::span<const EvalImage> images, std::span<const double> iou_thrs,
                    std::vector<std::string> classes, Interpolation mode) {
  if (iou_thrs.empty()) throw InvalidArgument("no IoU thresholds requested");
  if (classes.empty()) {
    std::set<std::string> seen;
    for (const auto& img : images) {
      for (const auto& g : img.ground_truth) seen.insert(g.class_label);
      for (const auto& d : img.detections) seen.insert(d.class_label);
    }
    classes.assign(seen.begin(), seen.end());
  }
  if (classes.empty()) throw InvalidArgument("nothing to evaluate: no classes");

  EvalResult out;
  for (double thr : iou_thrs) {
    MatchResult total;
    total.iou_thr = thr;
    for (const auto& img : images) accumulate(total, match_detections(img.detections, img.ground_truth, thr));
    EvalTable table;
    table.iou_thr = thr;
    std::vector<double> aps;
    for (const auto& label : classes) {
      const auto it = total.classes.find(label);
      const ClassMatch empty;
      const ClassMatch& cm = it == total.classes.end() ? empty : it->second;
      ClassRow row{label, thr, cm.tp, cm.fp, cm.fn, prf(cm), average_precision(cm, mode)};
      aps.push_back(row.ap);
      table.rows.push_back(std::move(row));
    }
    table.map = mean_ap(aps);
    out.tables.push_back(std::move(table));
  }
  return out;
}

EvalResult evaluate_run(const std::filesystem::path& detections_dir,
                        const std::filesystem::path& annotations_dir,
                        std::span<const double> iou_thrs, std::vector<std::string> classes,
                        Interpolation mode) {
  namespace fs = std::filesystem;
  std::map<std::string, fs::path> det_files;
  std::map<std::string, fs::path> ann_files;
  for (const auto& e : fs::directory_iterator(detections_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") det_files[e.path().stem().string()] = e.path();
  }
  for (const auto& e : fs::directory_iterator(annotations_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".xml") ann_files[e.path().stem().string()] = e.path();
  }
  std::vector<std::string> orphans;
  for (const auto& [stem, path] : det_files) {
    if (!ann_files.count(stem)) orphans.push_back(path.filename().string());
  }
  if (!orphans.empty()) {
    std::string list;
    for (const auto& o : orphans) list += (list.empty() ? "" : ", ") + o;
    throw Error("detection files without annotation: " + list);
  }
  std::vector<EvalImage> images;
  for (const auto& [stem, path] : ann_files) {
    EvalImage img;
    img.id = stem;
    for (auto& a : dataset::load_annotations(path).annotations) img.ground_truth.push_back(std::move(a));
    if (const auto it = det_files.find(stem); it != det_files.end()) {
      img.detections = dataset::read_detections_csv(it->second);
    }
    images.push_back(std::move(img));
  }
  return evaluate(images, iou_thrs, std::move(classes), mode);
}

std::string format_csv(const EvalResult& result) {
  std::string out = "class,iou,tp,fp,fn,prec,rec,f1,ap\n";
  for (const auto& t : result.tables) {
    for (const auto& r : t.rows) {
      out += fmt::format("{},{:.2f},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.label, r.iou_thr, r.tp,
                         r.fp, r.fn, r.prf.precision, r.prf.recall, r.prf.f1, r.ap);
    }
    out += fmt::format("mAP,{:.2f},,,,,,,{:.6f}\n", t.iou_thr, t.map);
  }
  return out;
}

std::string format_percent(double fraction) {
  // The small bias absorbs representation error in exact values such as 0.2722.
  const double hundredths = std::floor(fraction * 1e4 + 1e-6);
  return fmt::format("{:.2f}", hundredths / 100.0);
}

std::string format_table(const EvalResult& result) {
  std::size_t width = 5;
  for (const auto& t : result.tables) {
    for (const auto& r : t.rows) width = std::max(width, r.label.size());
  }
  std::string out;
  for (const auto& t : result.tables) {
    out += fmt::format("IoU threshold {:.2f}\n", t.iou_thr);
    out += fmt::format("{:<{}} {:>6} {:>6} {:>6} {:>8} {:>8} {:>8} {:>8}\n", "class", width, "TP", "FP",
                       "FN", "PREC%", "REC%", "F1%", "AP%");
    for (const auto& r : t.rows) {
      out += fmt::format("{:<{}} {:>6} {:>6} {:>6} {:>8} {:>8} {:>8} {:>8}\n", r.label, width, r.tp, r.fp,
                         r.fn, format_percent(r.prf.precision), format_percent(r.prf.recall),
                         format_percent(r.prf.f1), format_percent(r.ap));
    }
    out += fmt::format("{:<{}} {:>42}\n\n", "mAP", width, format_percent(t.map));
  }
  return out;
}

}  // namespace pvinspect::metrics
