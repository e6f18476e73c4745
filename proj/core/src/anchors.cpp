#include "pvinspect/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "pvinspect/error.hpp"

namespace pvinspect::anchors {
namespace {

// Portable uniform draw in [0, 1); std::uniform_real_distribution is not
// bit-identical across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t count_distinct(std::span<const BoxShape> shapes) {
  std::vector<std::pair<double, double>> v;
  v.reserve(shapes.size());
  for (const auto& s : shapes) v.emplace_back(s.width, s.height);
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

double median_of(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

class Clusterer {
 public:
  Clusterer(std::span<const BoxShape> shapes, std::size_t k, const KMeansOptions& opt)
      : shapes_(shapes), k_(k), opt_(opt) {}

  BoxShape centroid_of(std::size_t cluster, const std::vector<std::size_t>& assignment) const {
    std::vector<double> ws;
    std::vector<double> hs;
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
      if (assignment[i] != cluster) continue;
      ws.push_back(shapes_[i].width);
      hs.push_back(shapes_[i].height);
    }
    if (opt_.update == CentroidUpdate::median) return {median_of(ws), median_of(hs)};
    double sw = 0.0;
    double sh = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      sw += ws[i];
      sh += hs[i];
    }
    return {sw / ws.size(), sh / hs.size()};
  }

  std::vector<BoxShape> centroids_of(const std::vector<std::size_t>& assignment) const {
    std::vector<BoxShape> c(k_);
    for (std::size_t j = 0; j < k_; ++j) c[j] = centroid_of(j, assignment);
    return c;
  }

  double cluster_sse(std::size_t cluster, const BoxShape& centroid,
                     const std::vector<std::size_t>& assignment) const {
    double s = 0.0;
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
      if (assignment[i] != cluster) continue;
      const double d = shape_distance(shapes_[i], centroid);
      s += d * d;
    }
    return s;
  }

  double total_sse(const std::vector<BoxShape>& centroids,
                   const std::vector<std::size_t>& assignment) const {
    double s = 0.0;
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
      const double d = shape_distance(shapes_[i], centroids[assignment[i]]);
      s += d * d;
    }
    return s;
  }

  std::vector<BoxShape> seed(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<BoxShape> c;
    c.push_back(shapes_[static_cast<std::size_t>(uniform01(rng) * shapes_.size())]);
    std::vector<double> weight(shapes_.size());
    while (c.size() < k_) {
      double total = 0.0;
      for (std::size_t i = 0; i < shapes_.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& cc : c) best = std::min(best, shape_distance(shapes_[i], cc));
        weight[i] = best * best;
        total += weight[i];
      }
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      std::size_t pick = shapes_.size();
      for (std::size_t i = 0; i < shapes_.size(); ++i) {
        if (weight[i] <= 0.0) continue;
        acc += weight[i];
        pick = i;
        if (acc > target) break;
      }
      c.push_back(shapes_[pick]);
    }
    return c;
  }

  // Nearest centroid; a tie keeps the current cluster, otherwise the lowest
  // index wins.
  std::vector<std::size_t> assign(const std::vector<BoxShape>& centroids,
                                  const std::vector<std::size_t>* current) const {
    std::vector<std::size_t> a(shapes_.size());
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k_; ++j) {
        const double d = shape_distance(shapes_[i], centroids[j]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (current && shape_distance(shapes_[i], centroids[(*current)[i]]) == best_d) {
        best = (*current)[i];
      }
      a[i] = best;
    }
    return a;
  }

  // Any empty cluster takes the farthest member of the cluster with the
  // largest SSE.
  void repair_empty(std::vector<std::size_t>& assignment, std::vector<BoxShape>& centroids) const {
    while (true) {
      std::vector<std::size_t> sizes(k_, 0);
      for (auto a : assignment) ++sizes[a];
      const auto empty = std::find(sizes.begin(), sizes.end(), 0u);
      if (empty == sizes.end()) return;
      const auto empty_cluster = static_cast<std::size_t>(empty - sizes.begin());
      std::size_t donor = 0;
      double donor_sse = -1.0;
      for (std::size_t j = 0; j < k_; ++j) {
        if (sizes[j] < 2) continue;
        const double s = cluster_sse(j, centroids[j], assignment);
        if (s > donor_sse) {
          donor_sse = s;
          donor = j;
        }
      }
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < shapes_.size(); ++i) {
        if (assignment[i] != donor) continue;
        const double d = shape_distance(shapes_[i], centroids[donor]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      assignment[far] = empty_cluster;
      centroids[empty_cluster] = shapes_[far];
    }
  }

  // Single-shape moves between clusters, accepted while they lower the SSE.
  bool refine_once(std::vector<std::size_t>& assignment, std::vector<BoxShape>& centroids,
                   double& total) const {
    std::vector<std::size_t> sizes(k_, 0);
    for (auto a : assignment) ++sizes[a];
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
      const std::size_t from = assignment[i];
      if (sizes[from] < 2) continue;
      const double from_sse = cluster_sse(from, centroids[from], assignment);
      for (std::size_t to = 0; to < k_; ++to) {
        if (to == from) continue;
        const double to_sse = cluster_sse(to, centroids[to], assignment);
        assignment[i] = to;
        const BoxShape c_from = centroid_of(from, assignment);
        const BoxShape c_to = centroid_of(to, assignment);
        const double new_pair = cluster_sse(from, c_from, assignment) + cluster_sse(to, c_to, assignment);
        if (new_pair < from_sse + to_sse - 1e-12) {
          centroids[from] = c_from;
          centroids[to] = c_to;
          total = total_sse(centroids, assignment);
          return true;
        }
        assignment[i] = from;
      }
    }
    return false;
  }

  ClusteringResult run(std::uint64_t seed_value) const {
    ClusteringResult r;
    r.k = k_;
    std::vector<BoxShape> centroids = seed(seed_value);
    std::vector<std::size_t> assignment = assign(centroids, nullptr);
    repair_empty(assignment, centroids);
    centroids = centroids_of(assignment);
    double total = total_sse(centroids, assignment);
    r.sse_history.push_back(total);

    for (int it = 0; it < opt_.max_iterations; ++it) {
      std::vector<BoxShape> next_centroids = centroids;
      std::vector<std::size_t> next = assign(centroids, &assignment);
      repair_empty(next, next_centroids);
      if (next == assignment) break;
      next_centroids = centroids_of(next);
      const double next_total = total_sse(next_centroids, next);
      if (next_total > total) break;
      assignment = std::move(next);
      centroids = std::move(next_centroids);
      total = next_total;
      r.sse_history.push_back(total);
      ++r.iterations;
    }

    if (opt_.refine && shapes_.size() <= opt_.refine_limit) {
      int moves = 0;
      while (moves < opt_.max_iterations * static_cast<int>(shapes_.size()) &&
             refine_once(assignment, centroids, total)) {
        r.sse_history.push_back(total);
        ++moves;
      }
    }

    r.centroids = std::move(centroids);
    r.assignment = std::move(assignment);
    r.sse = total;
    r.mean_iou = mean_iou(r, shapes_);
    r.mean_silhouette = k_ >= 2 ? mean_silhouette(r, shapes_) : 0.0;
    return r;
  }

 private:
  std::span<const BoxShape> shapes_;
  std::size_t k_;
  KMeansOptions opt_;
};

void check_inputs(std::span<const BoxShape> shapes, std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  for (const auto& s : shapes) {
    if (!(s.width > 0.0 && s.height > 0.0) || !std::isfinite(s.width) || !std::isfinite(s.height)) {
      throw InvalidArgument("box shapes must have positive finite width and height");
    }
  }
  const std::size_t distinct = count_distinct(shapes);
  if (k > distinct) {
    throw InvalidArgument("k = " + std::to_string(k) + " exceeds the " + std::to_string(distinct) +
                          " distinct shapes");
  }
}

void check_result(const ClusteringResult& result, std::span<const BoxShape> shapes) {
  if (result.assignment.size() != shapes.size()) {
    throw InvalidArgument("assignment does not match the shape list");
  }
  for (auto a : result.assignment) {
    if (a >= result.centroids.size()) throw InvalidArgument("assignment index out of range");
  }
}

}  // namespace

double shape_iou(const BoxShape& a, const BoxShape& b) noexcept {
  const double inter = std::min(a.width, b.width) * std::min(a.height, b.height);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double shape_distance(const BoxShape& a, const BoxShape& b) noexcept { return 1.0 - shape_iou(a, b); }

ClusteringResult kmeans_iou(std::span<const BoxShape> shapes, std::size_t k, std::uint64_t seed,
                            const KMeansOptions& options) {
  check_inputs(shapes, k);
  return Clusterer(shapes, k, options).run(seed);
}

ClusteringResult kmeans_iou_best(std::span<const BoxShape> shapes, std::size_t k,
                                 std::uint64_t seed, int restarts, const KMeansOptions& options) {
  check_inputs(shapes, k);
  if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
  const Clusterer clusterer(shapes, k, options);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(restarts));
  std::mt19937_64 mixer(seed);
  for (auto& s : seeds) s = mixer();
  ClusteringResult best = clusterer.run(seeds[0]);
  for (std::size_t i = 1; i < seeds.size(); ++i) {
    ClusteringResult r = clusterer.run(seeds[i]);
    if (r.sse < best.sse) best = std::move(r);
  }
  return best;
}

double sse(const ClusteringResult& result, std::span<const BoxShape> shapes) {
  check_result(result, shapes);
  double s = 0.0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const double d = shape_distance(shapes[i], result.centroids[result.assignment[i]]);
    s += d * d;
  }
  return s;
}

double mean_iou(const ClusteringResult& result, std::span<const BoxShape> shapes) {
  check_result(result, shapes);
  if (shapes.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    s += shape_iou(shapes[i], result.centroids[result.assignment[i]]);
  }
  return s / shapes.size();
}

double mean_silhouette(const ClusteringResult& result, std::span<const BoxShape> shapes) {
  check_result(result, shapes);
  const std::size_t k = result.centroids.size();
  if (k < 2) throw InvalidArgument("silhouette needs at least 2 clusters");
  if (shapes.empty()) return 0.0;
  std::vector<std::size_t> sizes(k, 0);
  for (auto a : result.assignment) ++sizes[a];

  double total = 0.0;
  std::vector<double> sum_to(k);
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const std::size_t own = result.assignment[i];
    if (sizes[own] < 2) continue;  // singleton scores 0
    std::fill(sum_to.begin(), sum_to.end(), 0.0);
    for (std::size_t j = 0; j < shapes.size(); ++j) {
      if (j != i) sum_to[result.assignment[j]] += shape_distance(shapes[i], shapes[j]);
    }
    const double a = sum_to[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own && sizes[c] > 0) b = std::min(b, sum_to[c] / static_cast<double>(sizes[c]));
    }
    if (!std::isfinite(b)) continue;
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(shapes.size());
}

KSelection select_k(std::span<const BoxShape> shapes, std::span<const std::size_t> k_range,
                    std::uint64_t seed, int restarts) {
  if (k_range.empty()) throw InvalidArgument("k range is empty");
  KSelection sel;
  const std::size_t distinct = count_distinct(shapes);
  for (std::size_t k : k_range) {
    if (k == 0 || k > distinct) {
      sel.warnings.push_back("skipping k = " + std::to_string(k) + ": only " +
                             std::to_string(distinct) + " distinct shapes");
      continue;
    }
    const ClusteringResult r = kmeans_iou_best(shapes, k, seed, restarts);
    sel.per_k.push_back({k, r.mean_iou, r.sse, r.mean_silhouette, r.centroids});
  }
  if (sel.per_k.empty()) throw InvalidArgument("no feasible k in range");

  if (sel.per_k.size() < 3) {
    sel.best_k = sel.per_k.front().k;
  } else {
    const auto& first = sel.per_k.front();
    const auto& last = sel.per_k.back();
    const double dx = static_cast<double>(last.k) - static_cast<double>(first.k);
    const double dy = last.sse - first.sse;
    double best = -1.0;
    for (std::size_t i = 1; i + 1 < sel.per_k.size(); ++i) {
      const auto& p = sel.per_k[i];
      const double cross = std::abs(dx * (p.sse - first.sse) -
                                    dy * (static_cast<double>(p.k) - static_cast<double>(first.k)));
      if (cross > best) {
        best = cross;
        sel.best_k = p.k;
      }
    }
  }
  if (sel.best_k % 3 != 0) {
    sel.warnings.push_back("selected k = " + std::to_string(sel.best_k) +
                           " is not divisible by 3; anchors cannot be split evenly across three scales");
  }
  return sel;
}

std::array<std::vector<BoxShape>, 3> partition_anchors_by_scale(std::vector<BoxShape> centroids) {
  if (centroids.empty() || centroids.size() % 3 != 0) {
    throw InvalidArgument("anchor count " + std::to_string(centroids.size()) +
                          " is not a positive multiple of 3");
  }
  std::sort(centroids.begin(), centroids.end(), [](const BoxShape& a, const BoxShape& b) {
    if (a.area() != b.area()) return a.area() < b.area();
    if (a.width != b.width) return a.width < b.width;
    return a.height < b.height;
  });
  const std::size_t per = centroids.size() / 3;
  std::array<std::vector<BoxShape>, 3> groups;
  for (std::size_t g = 0; g < 3; ++g) {
    groups[g].assign(centroids.begin() + static_cast<std::ptrdiff_t>(g * per),
                     centroids.begin() + static_cast<std::ptrdiff_t>((g + 1) * per));
  }
  return groups;
}

}  // namespace pvinspect::anchors
