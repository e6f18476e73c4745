#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pvinspect::anchors {

/// Box size with the position discarded; clustering treats every shape as
/// centered at the origin.
struct BoxShape {
  double width = 0.0;
  double height = 0.0;

  double area() const noexcept { return width * height; }
  friend bool operator==(const BoxShape&, const BoxShape&) = default;
};

/// IoU of two co-centered shapes.
double shape_iou(const BoxShape& a, const BoxShape& b) noexcept;

/// 1 - shape_iou(a, b).
double shape_distance(const BoxShape& a, const BoxShape& b) noexcept;

enum class CentroidUpdate { median, mean };

struct KMeansOptions {
  CentroidUpdate update = CentroidUpdate::median;
  int max_iterations = 300;
  /// After Lloyd converges, move single shapes between clusters while that
  /// lowers the SSE. Skipped above `refine_limit` shapes.
  bool refine = true;
  std::size_t refine_limit = 500;
};

struct ClusteringResult {
  std::size_t k = 0;
  std::vector<BoxShape> centroids;
  std::vector<std::size_t> assignment;
  double mean_iou = 0.0;
  double sse = 0.0;
  /// Zero when k < 2.
  double mean_silhouette = 0.0;
  /// SSE after seeding and after every accepted update; non-increasing.
  std::vector<double> sse_history;
  int iterations = 0;
};

/// Lloyd iteration under the 1 - IoU distance with k-means++ seeding driven
/// by `seed`. An iteration is accepted only if it does not raise the SSE.
/// Throws InvalidArgument when k is 0 or exceeds the number of distinct
/// shapes, or a shape is not positive.
ClusteringResult kmeans_iou(std::span<const BoxShape> shapes, std::size_t k, std::uint64_t seed,
                            const KMeansOptions& options = {});

/// Lowest-SSE result over `restarts` seeds derived from `seed`.
ClusteringResult kmeans_iou_best(std::span<const BoxShape> shapes, std::size_t k,
                                 std::uint64_t seed, int restarts,
                                 const KMeansOptions& options = {});

/// Sum over shapes of the squared distance to their assigned centroid.
double sse(const ClusteringResult& result, std::span<const BoxShape> shapes);

/// Mean IoU between each shape and its assigned centroid.
double mean_iou(const ClusteringResult& result, std::span<const BoxShape> shapes);

/// Mean silhouette under the 1 - IoU distance; a singleton cluster and a
/// sample with a = b = 0 score 0. Throws for k < 2.
double mean_silhouette(const ClusteringResult& result, std::span<const BoxShape> shapes);

struct KDiagnostics {
  std::size_t k = 0;
  double mean_iou = 0.0;
  double sse = 0.0;
  double silhouette = 0.0;
  std::vector<BoxShape> centroids;
};

struct KSelection {
  std::size_t best_k = 0;
  std::vector<KDiagnostics> per_k;
  std::vector<std::string> warnings;
};

/// Runs the clustering for every k in `k_range` and picks the elbow of the
/// SSE curve. Values of k above the number of distinct shapes are skipped
/// with a warning.
KSelection select_k(std::span<const BoxShape> shapes, std::span<const std::size_t> k_range,
                    std::uint64_t seed, int restarts = 8);

/// Sorts by area and splits into three equal groups, finest scale first.
/// Throws InvalidArgument unless the count is a positive multiple of 3.
std::array<std::vector<BoxShape>, 3> partition_anchors_by_scale(std::vector<BoxShape> centroids);

}  // namespace pvinspect::anchors
