#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lbf/lbf.hpp"

namespace lbf {

struct ElbowCurve {
  std::vector<std::size_t> ks;  // 1..k_max
  std::vector<double> W;        // as supplied
  std::vector<double> W_used;   // after the zero guard
  std::vector<double> sod;      // sod[k-2] for k = 2..k_max-1
  std::size_t k_opt = 0;
};

/// Second-order difference elbow on ln W_k:
///   SOD(k) = ln W_{k-1} + ln W_{k+1} - 2 ln W_k,  k_opt = argmax (smallest k on ties).
/// Values below 1e-12 * W_1 are clamped to that floor before taking logs.
inline ElbowCurve sod_select(const std::vector<double>& W) {
  require(W.size() >= 3, "SOD needs at least three W values");
  ElbowCurve curve;
  curve.W = W;
  const double floor = 1e-12 * W.front();
  curve.W_used.reserve(W.size());
  for (std::size_t i = 0; i < W.size(); ++i) {
    curve.ks.push_back(i + 1);
    const double w = std::max(W[i], floor);
    require(w > 0.0 && std::isfinite(w), "degenerate energy: W_" + std::to_string(i + 1) + " is not positive");
    curve.W_used.push_back(w);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k + 1 <= W.size(); ++k) {
    const double s = std::log(curve.W_used[k - 2]) + std::log(curve.W_used[k]) - 2.0 * std::log(curve.W_used[k - 1]);
    curve.sod.push_back(s);
    if (s > best) {
      best = s;
      curve.k_opt = k;
    }
  }
  return curve;
}

struct WkCurve {
  std::vector<double> W;
  std::vector<double> elapsed_seconds;
};

inline constexpr std::size_t kDefaultModelRestarts = 3;

/// W_k = mean squared distance to the flats found by LBF with k clusters, for
/// k = 1..k_max. Each k keeps the lowest W over `restarts` seeded runs.
inline WkCurve wk_curve(const PointCloud& cloud, std::size_t d, std::size_t k_max, FlatKind kind, std::uint64_t seed,
                        const ScaleConfig* scale = nullptr, std::size_t restarts = kDefaultModelRestarts) {
  require(k_max >= 3, "k_max must be >= 3");
  require(restarts >= 1, "restart count must be >= 1");
  WkCurve out;
  for (std::size_t k = 1; k <= k_max; ++k) {
    double best = std::numeric_limits<double>::infinity();
    double elapsed = 0.0;
    for (std::size_t r = 0; r < restarts; ++r) {
      LbfConfig cfg = LbfConfig::defaults(d, k, kind, derive_seed(derive_seed(seed, "wk", k), "wk-restart", r));
      if (scale) cfg.scale = *scale;
      const auto result = lbf_cluster(cloud, cfg);
      best = std::min(best, result.mean_l2());
      elapsed += result.elapsed_seconds;
    }
    out.W.push_back(best);
    out.elapsed_seconds.push_back(elapsed);
  }
  return out;
}

struct ModelSelection {
  WkCurve curve;
  ElbowCurve elbow;
};

inline ModelSelection select_model_order(const PointCloud& cloud, std::size_t d, std::size_t k_max, FlatKind kind,
                                         std::uint64_t seed, std::size_t restarts = kDefaultModelRestarts) {
  ModelSelection out;
  out.curve = wk_curve(cloud, d, k_max, kind, seed, nullptr, restarts);
  out.elbow = sod_select(out.curve.W);
  return out;
}

}  // namespace lbf
