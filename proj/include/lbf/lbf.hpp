#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "lbf/geometry.hpp"
#include "lbf/parallel.hpp"
#include "lbf/rng.hpp"
#include "lbf/scale.hpp"

namespace lbf {

struct LbfConfig {
  std::size_t d = 1;
  std::size_t K = 2;
  std::size_t candidates = 140;  // C
  std::size_t passes = 6;        // p
  FlatKind kind = FlatKind::Affine;
  ScaleConfig scale;
  std::uint64_t seed = 0;
  bool keep_profiles = false;

  /// C = 70K, p = 3K, T = 2, S = d+2 (affine) or d+1 (linear).
  static LbfConfig defaults(std::size_t d, std::size_t K, FlatKind kind = FlatKind::Affine, std::uint64_t seed = 0) {
    LbfConfig cfg;
    cfg.d = d;
    cfg.K = K;
    cfg.candidates = 70 * K;
    cfg.passes = 3 * K;
    cfg.kind = kind;
    cfg.scale = ScaleConfig::defaults(d, kind);
    cfg.seed = seed;
    return cfg;
  }

  void validate() const {
    require(K >= 1, "K must be >= 1");
    require(K < candidates, "K must be < C (K=" + std::to_string(K) + ", C=" + std::to_string(candidates) + ")");
    require(passes >= 1, "pass count must be >= 1");
    scale.validate(d, kind);
  }
};

struct ClusteringResult {
  std::vector<Flat> flats;
  std::vector<int> labels;
  std::vector<double> distances;
  double l1_energy = 0.0;
  double l2_energy = 0.0;
  double elapsed_seconds = 0.0;
  /// Some flat received no points in the final assignment.
  bool has_empty_cluster = false;
  std::size_t iterations = 0;
  /// Objective after each pass (LBF: l1) or iteration (K-flats: l2).
  std::vector<double> energy_trace;
  std::vector<ScaleProfile> profiles;

  double mean_l1() const { return distances.empty() ? 0.0 : l1_energy / static_cast<double>(distances.size()); }
  double mean_l2() const { return distances.empty() ? 0.0 : l2_energy / static_cast<double>(distances.size()); }
};

struct Assignment {
  std::vector<int> labels;
  std::vector<double> distances;
};

/// Nearest flat per point; ties go to the lowest flat index.
inline Assignment assign(const PointCloud& cloud, const std::vector<Flat>& flats) {
  require(!flats.empty(), "flat list is empty");
  const std::size_t n = cloud.size();
  Assignment out;
  out.labels.assign(n, 0);
  out.distances.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t f = 0; f < flats.size(); ++f) {
    const Vector dist = distances_to_flat(cloud, flats[f]);
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[static_cast<Eigen::Index>(i)] < out.distances[i]) {
        out.distances[i] = dist[static_cast<Eigen::Index>(i)];
        out.labels[i] = static_cast<int>(f);
      }
    }
  }
  return out;
}

/// Sum over points of the distance to the nearest flat.
inline double l1_energy(const PointCloud& cloud, const std::vector<Flat>& flats) {
  const auto a = assign(cloud, flats);
  return std::accumulate(a.distances.begin(), a.distances.end(), 0.0);
}

struct CandidateSet {
  std::vector<Flat> flats;
  std::vector<std::size_t> seeds;  // index of the seed point per candidate
  std::vector<ScaleProfile> profiles;
};

/// Draws C seed points uniformly with replacement and fits one flat to each
/// seed's automatically sized neighborhood.
inline CandidateSet generate_candidates(const PointCloud& cloud, const LbfConfig& cfg, Rng& rng,
                                        bool keep_profiles = false) {
  cfg.validate();
  require(cloud.size() >= cfg.scale.start_size, "start size exceeds data: S=" + std::to_string(cfg.scale.start_size) +
                                                    " > N=" + std::to_string(cloud.size()));
  CandidateSet out;
  out.seeds.resize(cfg.candidates);
  for (auto& s : out.seeds) s = uniform_index(rng, cloud.size());

  std::vector<Flat> flats(cfg.candidates);
  std::vector<ScaleProfile> profiles(keep_profiles ? cfg.candidates : 0);
  parallel_for(cfg.candidates, [&](std::size_t c) {
    ScaleProfile profile = select_neighborhood(cloud, cloud.point(out.seeds[c]), cfg.d, cfg.scale, cfg.kind);
    flats[c] = best_fit_flat(cloud, profile.neighbor_indices, cfg.d, cfg.kind);
    if (keep_profiles) profiles[c] = std::move(profile);
  });
  out.flats = std::move(flats);
  out.profiles = std::move(profiles);
  return out;
}

/// N x C matrix of point-to-candidate distances, one column per candidate.
inline Eigen::MatrixXd candidate_distances(const PointCloud& cloud, const std::vector<Flat>& flats) {
  Eigen::MatrixXd dist(static_cast<Eigen::Index>(cloud.size()), static_cast<Eigen::Index>(flats.size()));
  parallel_for(flats.size(),
               [&](std::size_t c) { dist.col(static_cast<Eigen::Index>(c)) = distances_to_flat(cloud, flats[c]); });
  return dist;
}

struct GreedySelection {
  std::vector<std::size_t> active;  // candidate indices, one per slot
  std::vector<double> energy_trace;  // l1 energy at init, then after each pass
};

namespace detail {

inline double active_energy(const Eigen::MatrixXd& dist, const std::vector<std::size_t>& active) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a : active) best = std::min(best, dist(i, static_cast<Eigen::Index>(a)));
    total += best;
  }
  return total;
}

}  // namespace detail

/// Randomized greedy l1 selection over precomputed distances. Each pass picks a
/// random active slot, scores every inactive candidate in its place against the
/// other K-1 active flats, and commits the best replacement only if it lowers
/// the energy strictly.
inline GreedySelection greedy_select(const Eigen::MatrixXd& dist, std::size_t K, std::size_t passes, Rng& init_rng,
                                     Rng& pass_rng, std::vector<std::size_t> initial_active = {}) {
  const auto C = static_cast<std::size_t>(dist.cols());
  const auto N = dist.rows();
  require(K >= 1 && K < C, "K must satisfy 1 <= K < C (K=" + std::to_string(K) + ", C=" + std::to_string(C) + ")");
  require(passes >= 1, "pass count must be >= 1");

  GreedySelection sel;
  if (initial_active.empty()) {
    // Partial Fisher-Yates: K distinct candidates uniformly without replacement.
    std::vector<std::size_t> pool(C);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < K; ++i) {
      std::size_t j = i + uniform_index(init_rng, C - i);
      std::swap(pool[i], pool[j]);
    }
    sel.active.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(K));
  } else {
    require(initial_active.size() == K, "initial active set must have K entries");
    sel.active = std::move(initial_active);
  }

  std::vector<char> is_active(C, 0);
  for (std::size_t a : sel.active) {
    require(a < C && !is_active[a], "initial active set must be distinct candidate indices");
    is_active[a] = 1;
  }

  double energy = detail::active_energy(dist, sel.active);
  sel.energy_trace.push_back(energy);

  Vector others(N);
  for (std::size_t pass = 0; pass < passes; ++pass) {
    const std::size_t slot = uniform_index(pass_rng, K);
    for (Eigen::Index i = 0; i < N; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < K; ++s) {
        if (s != slot) best = std::min(best, dist(i, static_cast<Eigen::Index>(sel.active[s])));
      }
      others[i] = best;
    }
    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best_candidate = C;
    for (std::size_t j = 0; j < C; ++j) {
      if (is_active[j]) continue;
      const double score = others.cwiseMin(dist.col(static_cast<Eigen::Index>(j))).sum();
      if (score < best_score) {
        best_score = score;
        best_candidate = j;
      }
    }
    if (best_candidate < C && best_score < energy) {
      is_active[sel.active[slot]] = 0;
      is_active[best_candidate] = 1;
      sel.active[slot] = best_candidate;
      energy = best_score;
    }
    sel.energy_trace.push_back(energy);
  }
  return sel;
}

/// Greedy selection returning the chosen flats directly.
inline std::vector<Flat> greedy_select(const PointCloud& cloud, const std::vector<Flat>& candidates, std::size_t K,
                                       std::size_t passes, Rng& rng) {
  const auto dist = candidate_distances(cloud, candidates);
  Rng pass_rng(rng());
  const auto sel = greedy_select(dist, K, passes, rng, pass_rng);
  std::vector<Flat> out;
  for (std::size_t a : sel.active) out.push_back(candidates[a]);
  return out;
}

/// Fills labels, distances and energies of a result from its flats.
inline void finalize_assignment(const PointCloud& cloud, ClusteringResult& result) {
  auto a = assign(cloud, result.flats);
  result.labels = std::move(a.labels);
  result.distances = std::move(a.distances);
  result.l1_energy = 0.0;
  result.l2_energy = 0.0;
  for (double v : result.distances) {
    result.l1_energy += v;
    result.l2_energy += v * v;
  }
  std::vector<char> used(result.flats.size(), 0);
  for (int l : result.labels) used[static_cast<std::size_t>(l)] = 1;
  result.has_empty_cluster = std::find(used.begin(), used.end(), 0) != used.end();
}

/// Full clustering run: candidate generation, greedy l1 selection,
/// nearest-flat assignment.
inline ClusteringResult lbf_cluster(const PointCloud& cloud, const LbfConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  Rng candidate_rng = make_rng(cfg.seed, "candidates");
  Rng init_rng = make_rng(cfg.seed, "init");
  Rng pass_rng = make_rng(cfg.seed, "passes");

  auto candidates = generate_candidates(cloud, cfg, candidate_rng, cfg.keep_profiles);
  const auto dist = candidate_distances(cloud, candidates.flats);
  const auto sel = greedy_select(dist, cfg.K, cfg.passes, init_rng, pass_rng);

  ClusteringResult result;
  for (std::size_t a : sel.active) result.flats.push_back(candidates.flats[a]);
  finalize_assignment(cloud, result);
  result.iterations = cfg.passes;
  result.energy_trace = sel.energy_trace;
  if (cfg.keep_profiles) result.profiles = std::move(candidates.profiles);
  result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace lbf
