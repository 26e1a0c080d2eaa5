#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lbf/lbf.hpp"
#include "lbf/parallel.hpp"

namespace lbf {

/// Farthest insertion with a fixed neighborhood of m points.
struct FixedNeighborhood {
  std::size_t m = 10;
};

/// Farthest insertion with neighborhoods chosen by beta2 scale selection.
struct AdaptiveNeighborhood {
  ScaleConfig scale;
};

using NeighborhoodRule = std::variant<FixedNeighborhood, AdaptiveNeighborhood>;

/// Random initialization: every point gets a uniformly random label and each
/// flat is fit to its label class.
struct RandomInit {};

using KFlatsInit = std::variant<RandomInit, FixedNeighborhood, AdaptiveNeighborhood>;

struct KFlatsConfig {
  std::size_t d = 1;
  std::size_t K = 2;
  FlatKind kind = FlatKind::Affine;
  std::size_t max_iters = 100;
  double tol = 1e-8;  // relative change of the l2 energy
  KFlatsInit init = RandomInit{};

  void validate() const {
    require(K >= 1, "K must be >= 1");
    require(max_iters >= 1, "max_iters must be >= 1");
    require(tol > 0.0, "tol must be > 0");
  }
};

namespace detail {

inline std::vector<std::size_t> insertion_neighborhood(const PointCloud& cloud, std::size_t seed, std::size_t d,
                                                       FlatKind kind, const NeighborhoodRule& rule) {
  if (const auto* fixed = std::get_if<FixedNeighborhood>(&rule)) {
    return nearest_neighbors(cloud, cloud.point(seed), fixed->m);
  }
  const auto& adaptive = std::get<AdaptiveNeighborhood>(rule);
  return select_neighborhood(cloud, cloud.point(seed), d, adaptive.scale, kind).neighbor_indices;
}

}  // namespace detail

struct FarthestInsertion {
  std::vector<Flat> flats;
  std::vector<std::size_t> seeds;
};

/// Geometric farthest insertion: fit a flat to the neighborhood of a random
/// seed, then repeatedly seed at the data point farthest from all flats so far.
/// Earlier seeds are never reused.
inline FarthestInsertion farthest_insertion_init(const PointCloud& cloud, std::size_t d, std::size_t K,
                                                 const NeighborhoodRule& rule, Rng& rng,
                                                 FlatKind kind = FlatKind::Affine) {
  require(K >= 1, "K must be >= 1");
  require(K <= cloud.size(), "K exceeds the number of points");
  if (const auto* fixed = std::get_if<FixedNeighborhood>(&rule)) {
    require(fixed->m >= d + 1, "fixed neighborhood size must be >= d+1");
    require(fixed->m <= cloud.size(), "fixed neighborhood size exceeds data: m=" + std::to_string(fixed->m) +
                                          " > N=" + std::to_string(cloud.size()));
  }

  FarthestInsertion out;
  std::vector<double> nearest(cloud.size(), std::numeric_limits<double>::infinity());
  std::vector<char> used(cloud.size(), 0);
  std::size_t seed = uniform_index(rng, cloud.size());
  for (std::size_t k = 0; k < K; ++k) {
    used[seed] = 1;
    out.seeds.push_back(seed);
    const auto hood = detail::insertion_neighborhood(cloud, seed, d, kind, rule);
    out.flats.push_back(best_fit_flat(cloud, hood, d, kind));
    if (k + 1 == K) break;
    const Vector dist = distances_to_flat(cloud, out.flats.back());
    std::size_t far = cloud.size();
    double far_dist = -1.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      nearest[i] = std::min(nearest[i], dist[static_cast<Eigen::Index>(i)]);
      if (!used[i] && nearest[i] > far_dist) {
        far_dist = nearest[i];
        far = i;
      }
    }
    require(far < cloud.size(), "no unused seed point left");
    seed = far;
  }
  return out;
}

/// Flats fit to a uniformly random labeling of the points.
inline std::vector<Flat> random_partition_init(const PointCloud& cloud, std::size_t d, std::size_t K, FlatKind kind,
                                               Rng& rng) {
  std::vector<std::vector<std::size_t>> members(K);
  for (std::size_t i = 0; i < cloud.size(); ++i) members[uniform_index(rng, K)].push_back(i);
  std::vector<Flat> flats;
  for (auto& m : members) {
    if (m.empty()) m.push_back(uniform_index(rng, cloud.size()));
    flats.push_back(best_fit_flat(cloud, m, d, kind));
  }
  return flats;
}

/// Lloyd-style K-flats: alternate nearest-flat assignment and per-cluster
/// best-fit refits until the relative l2 change drops below tol. A flat left
/// without points is refit to the neighborhood of the point currently farthest
/// from its flat.
inline ClusteringResult kflats(const PointCloud& cloud, const KFlatsConfig& cfg,
                               std::optional<std::vector<Flat>> init_flats, Rng& rng) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<Flat> flats;
  if (init_flats) {
    require(init_flats->size() == cfg.K, "initial flat count must equal K");
    flats = std::move(*init_flats);
  } else if (std::holds_alternative<RandomInit>(cfg.init)) {
    flats = random_partition_init(cloud, cfg.d, cfg.K, cfg.kind, rng);
  } else if (const auto* fixed = std::get_if<FixedNeighborhood>(&cfg.init)) {
    flats = farthest_insertion_init(cloud, cfg.d, cfg.K, *fixed, rng, cfg.kind).flats;
  } else {
    flats = farthest_insertion_init(cloud, cfg.d, cfg.K, std::get<AdaptiveNeighborhood>(cfg.init), rng, cfg.kind).flats;
  }

  ClusteringResult result;
  result.flats = std::move(flats);
  finalize_assignment(cloud, result);
  result.energy_trace.push_back(result.l2_energy);

  const std::size_t reseed_size = std::min(cloud.size(), ScaleConfig::min_start_size(cfg.d, cfg.kind));
  for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
    std::vector<std::vector<std::size_t>> members(cfg.K);
    for (std::size_t i = 0; i < cloud.size(); ++i) members[static_cast<std::size_t>(result.labels[i])].push_back(i);

    std::vector<Flat> next(cfg.K);
    std::vector<double> dist = result.distances;
    for (std::size_t k = 0; k < cfg.K; ++k) {
      if (!members[k].empty()) {
        next[k] = best_fit_flat(cloud, members[k], cfg.d, cfg.kind);
        continue;
      }
      const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
      dist[far] = -1.0;
      next[k] = best_fit_flat(cloud, nearest_neighbors(cloud, cloud.point(far), reseed_size), cfg.d, cfg.kind);
    }

    const double previous = result.l2_energy;
    result.flats = std::move(next);
    finalize_assignment(cloud, result);
    result.energy_trace.push_back(result.l2_energy);
    result.iterations = iter + 1;
    const double change = previous - result.l2_energy;
    if (previous == 0.0 || change <= cfg.tol * previous) break;
  }
  result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

/// Best of R independent K-flats runs by smallest l2 energy.
inline ClusteringResult kflats_best_of(const PointCloud& cloud, const KFlatsConfig& cfg, std::size_t restarts,
                                       std::uint64_t seed) {
  require(restarts >= 1, "restart count must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  std::vector<ClusteringResult> runs(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    Rng rng = make_rng(seed, "kflats-restart", r);
    runs[r] = kflats(cloud, cfg, std::nullopt, rng);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r) {
    if (runs[r].l2_energy < runs[best].l2_energy) best = r;
  }
  ClusteringResult out = std::move(runs[best]);
  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace lbf
