#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "lbf/geometry.hpp"

namespace lbf {

/// Brute-force nearest-neighbor ordering. Ties at equal distance are broken by
/// ascending point index so that neighborhoods are deterministic.
template <class Derived>
std::vector<std::size_t> nearest_neighbors(const PointCloud& cloud, const Eigen::MatrixBase<Derived>& query,
                                           std::size_t k) {
  require(static_cast<std::size_t>(query.size()) == cloud.ambient_dim(), "dimension mismatch in neighbor query");
  const std::size_t n = cloud.size();
  k = std::min(k, n);
  const Vector q = detail::to_vector(query);
  const Vector dist2 = (cloud.points().rowwise() - q.transpose()).rowwise().squaredNorm();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto closer = [&](std::size_t a, std::size_t b) {
    const double da = dist2[static_cast<Eigen::Index>(a)];
    const double db = dist2[static_cast<Eigen::Index>(b)];
    return da < db || (da == db && a < b);
  };
  if (k < n) {
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), closer);
    order.resize(k);
  } else {
    std::sort(order.begin(), order.end(), closer);
  }
  return order;
}

/// Nearest-first ordering that is sorted lazily: prefix(k) returns the k
/// nearest points, sorting only as far as requested. Same order as
/// nearest_neighbors.
class NeighborStream {
public:
  template <class Derived>
  NeighborStream(const PointCloud& cloud, const Eigen::MatrixBase<Derived>& query) {
    require(static_cast<std::size_t>(query.size()) == cloud.ambient_dim(), "dimension mismatch in neighbor query");
    const Vector q = detail::to_vector(query);
    dist2_ = (cloud.points().rowwise() - q.transpose()).rowwise().squaredNorm();
    order_.resize(cloud.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }

  std::size_t size() const { return order_.size(); }

  std::span<const std::size_t> prefix(std::size_t k) {
    k = std::min(k, order_.size());
    if (k > sorted_) extend(std::min(order_.size(), std::max({k, 2 * sorted_, std::size_t{32}})));
    return {order_.data(), k};
  }

private:
  bool closer(std::size_t a, std::size_t b) const {
    const double da = dist2_[static_cast<Eigen::Index>(a)];
    const double db = dist2_[static_cast<Eigen::Index>(b)];
    return da < db || (da == db && a < b);
  }

  void extend(std::size_t upto) {
    auto cmp = [this](std::size_t a, std::size_t b) { return closer(a, b); };
    const auto first = order_.begin() + static_cast<std::ptrdiff_t>(sorted_);
    const auto mid = order_.begin() + static_cast<std::ptrdiff_t>(upto);
    if (mid != order_.end()) std::nth_element(first, mid, order_.end(), cmp);
    std::sort(first, mid, cmp);
    sorted_ = upto;
  }

  Vector dist2_;
  std::vector<std::size_t> order_;
  std::size_t sorted_ = 0;
};

/// All points ordered by distance to the query.
template <class Derived>
std::vector<std::size_t> neighbor_order(const PointCloud& cloud, const Eigen::MatrixBase<Derived>& query) {
  return nearest_neighbors(cloud, query, cloud.size());
}

}  // namespace lbf
