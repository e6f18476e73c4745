#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "pvinspect/dataset.hpp"
#include "pvinspect/error.hpp"

namespace pvinspect::dataset {

DatasetSplit stratified_split(std::span<const AnnotatedImage> images, const SplitRatios& ratios,
                              std::uint64_t seed, bool strict) {
  const std::array<double, 3> r{ratios.train, ratios.validation, ratios.test};
  for (double v : r) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("split ratios must lie in [0, 1]");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) throw InvalidArgument("split ratios must sum to 1");

  std::map<std::string, std::size_t> class_index;
  for (const auto& img : images) {
    for (const auto& a : img.annotations) class_index.emplace(a.class_label, 0);
  }
  std::size_t next = 0;
  for (auto& [name, idx] : class_index) idx = next++;
  const std::size_t n_classes = class_index.size();

  std::vector<std::vector<double>> counts(images.size(), std::vector<double>(n_classes, 0.0));
  std::vector<double> totals(n_classes, 0.0);
  std::vector<std::size_t> images_with(n_classes, 0);
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::set<std::size_t> seen;
    for (const auto& a : images[i].annotations) {
      const std::size_t c = class_index.at(a.class_label);
      counts[i][c] += 1.0;
      totals[c] += 1.0;
      seen.insert(c);
    }
    for (auto c : seen) ++images_with[c];
  }
  if (strict) {
    for (const auto& [name, c] : class_index) {
      if (images_with[c] < 3) {
        throw InvalidArgument("class '" + name + "' appears in only " +
                              std::to_string(images_with[c]) + " images; strict split needs 3");
      }
    }
  }

  // Seeded Fisher-Yates, then a stable sort so ties keep the shuffled order.
  std::vector<std::size_t> order(images.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(static_cast<double>(rng() >> 11) * 0x1.0p-53 * i);
    std::swap(order[i - 1], order[j]);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return images[a].annotations.size() > images[b].annotations.size();
  });

  std::array<std::vector<double>, 3> have;
  for (auto& h : have) h.assign(n_classes, 0.0);
  std::array<double, 3> have_images{0.0, 0.0, 0.0};
  const double n_images = static_cast<double>(images.size());

  DatasetSplit out;
  out.ratios = ratios;
  std::array<std::vector<std::size_t>*, 3> lists{&out.train, &out.validation, &out.test};
  for (std::size_t img : order) {
    std::size_t best = 0;
    double best_cost = INFINITY;
    double best_image_cost = INFINITY;
    for (std::size_t s = 0; s < 3; ++s) {
      double cost = 0.0;
      for (std::size_t c = 0; c < n_classes; ++c) {
        if (counts[img][c] == 0.0) continue;
        const double target = r[s] * totals[c];
        const double before = have[s][c] - target;
        const double after = before + counts[img][c];
        cost += (after * after - before * before) / totals[c];
      }
      const double ib = have_images[s] - r[s] * n_images;
      const double image_cost = (ib + 1.0) * (ib + 1.0) - ib * ib;
      if (cost < best_cost - 1e-12 ||
          (std::abs(cost - best_cost) <= 1e-12 && image_cost < best_image_cost - 1e-12)) {
        best = s;
        best_cost = cost;
        best_image_cost = image_cost;
      }
    }
    for (std::size_t c = 0; c < n_classes; ++c) have[best][c] += counts[img][c];
    have_images[best] += 1.0;
    lists[best]->push_back(img);
  }
  for (auto* l : lists) std::sort(l->begin(), l->end());

  for (const auto& [name, c] : class_index) {
    std::array<double, 3> f{};
    for (std::size_t s = 0; s < 3; ++s) f[s] = totals[c] > 0.0 ? have[s][c] / totals[c] : 0.0;
    out.class_fractions[name] = f;
  }
  return out;
}

}  // namespace pvinspect::dataset
