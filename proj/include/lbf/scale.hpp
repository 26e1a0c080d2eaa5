#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lbf/geometry.hpp"
#include "lbf/knn.hpp"

namespace lbf {

/// Neighborhood growth schedule and seed refinement for local flat fitting.
struct ScaleConfig {
  std::size_t start_size = 4;  // S
  std::size_t step = 2;        // T
  bool mean_shift = false;
  std::size_t mean_shift_neighbors = 10;  // l
  std::size_t mean_shift_iters = 5;       // m
  /// Accept the smallest scale as a minimum when beta2(0) < beta2(1).
  bool allow_first_scale_min = false;
  /// Largest neighborhood examined; 0 means the whole cloud.
  std::size_t max_size = 0;

  /// Smallest start size that generically has a nonzero fitting residual.
  static std::size_t min_start_size(std::size_t d, FlatKind kind) { return kind == FlatKind::Affine ? d + 2 : d + 1; }

  static ScaleConfig defaults(std::size_t d, FlatKind kind) {
    ScaleConfig cfg;
    cfg.start_size = min_start_size(d, kind);
    return cfg;
  }

  void validate(std::size_t d, FlatKind kind) const {
    require(start_size >= min_start_size(d, kind),
            "start size " + std::to_string(start_size) + " is below the minimum " +
                std::to_string(min_start_size(d, kind)) + " for " + to_string(kind) + " " + std::to_string(d) +
                "-flats");
    require(step >= 1, "scale step must be >= 1");
    if (mean_shift) require(mean_shift_neighbors >= 1, "mean-shift neighbor count must be >= 1");
  }
};

/// Multiscale record for one seed point.
struct ScaleProfile {
  Vector center;
  std::vector<std::size_t> sizes;
  std::vector<double> beta2_values;
  std::size_t selected_index = 0;
  std::vector<std::size_t> neighbor_indices;  // selected neighborhood, nearest first

  std::size_t selected_size() const { return sizes.at(selected_index); }
};

/// Scaled least-squares d-flat error of a neighborhood about x0:
///   sqrt( min_L sum ||y - P_L y||^2 / (|N| * max ||y - x0||^2) ).
/// A zero-radius neighborhood (every point equal to x0) has beta2 = 0.
template <class Derived>
double beta2(const Matrix& neighborhood, const Eigen::MatrixBase<Derived>& x0, std::size_t d, FlatKind kind) {
  require(neighborhood.rows() >= 1, "empty neighborhood");
  require(neighborhood.cols() == x0.size(), "dimension mismatch between neighborhood and center");
  const Vector center = detail::to_vector(x0);
  const double radius2 = (neighborhood.rowwise() - center.transpose()).rowwise().squaredNorm().maxCoeff();
  if (radius2 == 0.0) return 0.0;
  const double residual = fit_residual(neighborhood, d, kind);
  const double value = std::sqrt(residual / (static_cast<double>(neighborhood.rows()) * radius2));
  return std::min(value, 1.0);
}

/// Moves x to the centroid of its l nearest points in the cloud, m times. Each
/// neighborhood is taken about the current (already shifted) location.
template <class Derived>
Vector mean_shift_center(const PointCloud& cloud, const Eigen::MatrixBase<Derived>& x, std::size_t neighbors,
                         std::size_t iters) {
  require(cloud.size() >= 1, "empty cloud");
  require(neighbors >= 1, "mean-shift neighbor count must be >= 1");
  require(neighbors <= cloud.size(), "mean-shift neighbor count exceeds data size");
  Vector current = detail::to_vector(x);
  for (std::size_t it = 0; it < iters; ++it) {
    const auto idx = nearest_neighbors(cloud, current, neighbors);
    Vector sum = Vector::Zero(current.size());
    for (std::size_t i : idx) sum += cloud.point(i).transpose();
    current = sum / static_cast<double>(idx.size());
  }
  return current;
}

/// Stop rule applied after beta[k] has been appended. Fires at the first
/// strict interior local minimum beta[k-1] < min(beta[k-2], beta[k]); at
/// beta[0] < beta[1] when the first scale may count; and at the last scale of
/// an exact-zero run followed by a positive value, since no scale can fit
/// better than zero.
inline std::optional<std::size_t> scale_stop_at(const std::vector<double>& beta, std::size_t k,
                                                bool allow_first_scale_min) {
  if (k == 0) return std::nullopt;
  if (beta[k - 1] == 0.0 && beta[k] > 0.0) return k - 1;
  if (k == 1) {
    if (allow_first_scale_min && beta[0] < beta[1]) return 0;
    return std::nullopt;
  }
  if (beta[k - 1] < std::min(beta[k - 2], beta[k])) return k - 1;
  return std::nullopt;
}

/// Index chosen for a complete beta2 sequence: the first stop of
/// scale_stop_at, else the global minimum (lowest index on ties).
inline std::size_t scale_stop_index(const std::vector<double>& beta, bool allow_first_scale_min) {
  require(!beta.empty(), "empty beta2 sequence");
  for (std::size_t k = 1; k < beta.size(); ++k) {
    if (auto stop = scale_stop_at(beta, k, allow_first_scale_min)) return *stop;
  }
  return static_cast<std::size_t>(std::min_element(beta.begin(), beta.end()) - beta.begin());
}

/// Grows k-nearest neighborhoods of sizes S, S+T, ... around x (mean-shifted
/// first if configured) and stops at the first local minimum of beta2.
template <class Derived>
ScaleProfile select_neighborhood(const PointCloud& cloud, const Eigen::MatrixBase<Derived>& x, std::size_t d,
                                 const ScaleConfig& cfg, FlatKind kind) {
  cfg.validate(d, kind);
  require(d < cloud.ambient_dim(), "dimension out of range: d must be < D");
  require(cfg.start_size <= cloud.size(), "start size exceeds data: S=" + std::to_string(cfg.start_size) +
                                              " > N=" + std::to_string(cloud.size()));

  ScaleProfile profile;
  profile.center = cfg.mean_shift ? mean_shift_center(cloud, x, std::min(cfg.mean_shift_neighbors, cloud.size()),
                                                      cfg.mean_shift_iters)
                                  : detail::to_vector(x);

  const std::size_t cap = cfg.max_size == 0 ? cloud.size() : std::clamp(cfg.max_size, cfg.start_size, cloud.size());
  NeighborStream order(cloud, profile.center);

  std::optional<std::size_t> chosen;
  for (std::size_t size = cfg.start_size; size <= cap && !chosen; size += cfg.step) {
    const Matrix hood = cloud.gather(order.prefix(size));
    profile.sizes.push_back(size);
    profile.beta2_values.push_back(beta2(hood, profile.center, d, kind));
    chosen = scale_stop_at(profile.beta2_values, profile.beta2_values.size() - 1, cfg.allow_first_scale_min);
  }
  if (!chosen) chosen = scale_stop_index(profile.beta2_values, cfg.allow_first_scale_min);

  profile.selected_index = *chosen;
  const auto selected = order.prefix(profile.sizes[*chosen]);
  profile.neighbor_indices.assign(selected.begin(), selected.end());
  return profile;
}

}  // namespace lbf
