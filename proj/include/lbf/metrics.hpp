#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

#include "lbf/error.hpp"
#include "lbf/geometry.hpp"

namespace lbf {

/// Maximum-weight perfect matching on a square matrix (Hungarian method,
/// O(n^3)). Returns match[row] = column.
inline std::vector<std::size_t> max_weight_matching(const std::vector<std::vector<double>>& weight) {
  const std::size_t n = weight.size();
  if (n == 0) return {};
  double top = 0.0;
  for (const auto& row : weight) {
    require(row.size() == n, "matching requires a square weight matrix");
    for (double w : row) top = std::max(top, w);
  }
  // Minimize cost = top - weight; potentials u (rows), v (cols), 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = (top - weight[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> match(n);
  for (std::size_t j = 1; j <= n; ++j) match[p[j] - 1] = j - 1;
  return match;
}

/// Percentage of misclassified inliers. Points whose truth label is the outlier
/// sentinel are ignored; predicted labels are matched to truth labels by the
/// one-to-one assignment maximizing agreement.
inline double misclassification_rate(const std::vector<int>& predicted, const std::vector<int>& truth) {
  require(predicted.size() == truth.size(), "label vectors differ in length");
  std::map<int, std::size_t> pred_ids, truth_ids;
  std::size_t inliers = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == kOutlierLabel) continue;
    ++inliers;
    pred_ids.try_emplace(predicted[i], pred_ids.size());
    truth_ids.try_emplace(truth[i], truth_ids.size());
  }
  require(inliers > 0, "no inliers to score");

  const std::size_t n = std::max(pred_ids.size(), truth_ids.size());
  std::vector<std::vector<double>> confusion(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == kOutlierLabel) continue;
    confusion[pred_ids[predicted[i]]][truth_ids[truth[i]]] += 1.0;
  }
  const auto match = max_weight_matching(confusion);
  double agree = 0.0;
  for (std::size_t r = 0; r < n; ++r) agree += confusion[r][match[r]];
  return 100.0 * (static_cast<double>(inliers) - agree) / static_cast<double>(inliers);
}

}  // namespace lbf
