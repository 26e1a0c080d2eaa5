#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lbf/data.hpp"
#include "lbf/kflats.hpp"
#include "lbf/lbf.hpp"
#include "lbf/metrics.hpp"
#include "lbf/modelsel.hpp"
#include "lbf/parallel.hpp"

namespace lbf {

/// A named d^K in R^D (or mixed-dimension) configuration.
struct BenchSetting {
  std::string name;
  std::vector<std::size_t> dims;
  std::size_t ambient;
};

inline const std::vector<BenchSetting>& bench_settings() {
  static const std::vector<BenchSetting> settings = {
      {"2^2inR4", {2, 2}, 4},
      {"4^2inR6", {4, 4}, 6},
      {"2^4inR4", {2, 2, 2, 2}, 4},
      {"10^2inR15", {10, 10}, 15},
      {"4-5-6inR10", {4, 5, 6}, 10},
  };
  return settings;
}

inline std::optional<BenchSetting> find_setting(const std::string& name) {
  for (const auto& s : bench_settings()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

inline std::string setting_names() {
  std::string out;
  for (const auto& s : bench_settings()) out += (out.empty() ? "" : ", ") + s.name;
  return out;
}

enum class BenchMethod {
  Lbf,    // vanilla: no mean shift, interior local minima only
  LbfMs,  // mean-shifted seeds (l=10, m=5) and first scale allowed as a minimum
  KFlats, // best of R random-initialized K-flats runs by l2 energy
};

struct BenchOptions {
  BenchSetting setting = bench_settings().front();
  FlatKind kind = FlatKind::Affine;
  double outlier_fraction = 0.05;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  BenchMethod method = BenchMethod::Lbf;
  std::size_t restarts = 30;
  std::size_t samples_per_subspace = 250;
  double noise_sigma = 0.05;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t data_seed = 0;
  std::uint64_t method_seed = 0;
  double error_percent = 0.0;
  double seconds = 0.0;
  double l1_energy = 0.0;
  double l2_energy = 0.0;
};

struct BenchSummary {
  std::vector<TrialRecord> trials;
  double mean_error = 0.0;
  double median_error = 0.0;
  double mean_seconds = 0.0;
};

inline double median(std::vector<double> v) {
  require(!v.empty(), "median of empty sequence");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// LBF configuration for a benchmark method (C = 70K, p = 3K, T = 2).
inline LbfConfig bench_lbf_config(std::size_t d, std::size_t K, FlatKind kind, BenchMethod method,
                                  std::uint64_t seed) {
  LbfConfig cfg = LbfConfig::defaults(d, K, kind, seed);
  if (method == BenchMethod::LbfMs) {
    cfg.scale.mean_shift = true;
    cfg.scale.mean_shift_neighbors = 10;
    cfg.scale.mean_shift_iters = 5;
    cfg.scale.allow_first_scale_min = true;
  }
  return cfg;
}

inline SyntheticSpec bench_spec(const BenchOptions& opt, std::size_t trial) {
  SyntheticSpec spec;
  spec.dims = opt.setting.dims;
  spec.ambient = opt.setting.ambient;
  spec.samples_per_subspace = opt.samples_per_subspace;
  spec.noise_sigma = opt.noise_sigma;
  spec.outlier_fraction = opt.outlier_fraction;
  spec.kind = opt.kind;
  spec.seed = derive_seed(opt.seed, "bench-data", trial);
  return spec;
}

/// Generates `trials` data sets and clusters each one. Mixed dimensions are
/// clustered with the largest dimension. Trials run concurrently; records are
/// stored in trial order.
inline BenchSummary run_benchmark(const BenchOptions& opt) {
  require(opt.trials >= 1, "trial count must be >= 1");
  BenchSummary summary;
  summary.trials.resize(opt.trials);
  parallel_for(opt.trials, [&](std::size_t t) {
    const SyntheticSpec spec = bench_spec(opt, t);
    const auto data = generate(spec);
    const std::size_t d = spec.max_dim();
    const std::size_t K = spec.dims.size();
    TrialRecord rec;
    rec.trial = t;
    rec.data_seed = spec.seed;
    rec.method_seed = derive_seed(opt.seed, "bench-method", t);
    ClusteringResult result;
    if (opt.method == BenchMethod::KFlats) {
      KFlatsConfig kcfg;
      kcfg.d = d;
      kcfg.K = K;
      kcfg.kind = opt.kind;
      result = kflats_best_of(data.cloud, kcfg, opt.restarts, rec.method_seed);
    } else {
      result = lbf_cluster(data.cloud, bench_lbf_config(d, K, opt.kind, opt.method, rec.method_seed));
    }
    rec.error_percent = misclassification_rate(result.labels, data.truth);
    rec.seconds = result.elapsed_seconds;
    rec.l1_energy = result.l1_energy;
    rec.l2_energy = result.l2_energy;
    summary.trials[t] = rec;
  });
  std::vector<double> errors;
  for (const auto& r : summary.trials) {
    errors.push_back(r.error_percent);
    summary.mean_error += r.error_percent;
    summary.mean_seconds += r.seconds;
  }
  summary.mean_error /= static_cast<double>(opt.trials);
  summary.mean_seconds /= static_cast<double>(opt.trials);
  summary.median_error = median(errors);
  return summary;
}

/// Model-order selection protocol: 100*d samples per subspace, no outliers,
/// SOD over LBF runs with k = 1..k_max affine flats.
struct ModelSelOptions {
  std::vector<std::size_t> dims;
  std::size_t ambient = 0;
  std::optional<double> min_angle;
  FlatKind data_kind = FlatKind::Linear;
  std::size_t k_max = 10;
  std::size_t restarts = kDefaultModelRestarts;
  double noise_sigma = 0.05;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
};

struct ModelSelTrial {
  std::size_t trial = 0;
  std::size_t k_opt = 0;
  double seconds = 0.0;
};

inline std::vector<ModelSelTrial> run_modelsel_benchmark(const ModelSelOptions& opt) {
  require(!opt.dims.empty(), "model selection benchmark needs subspace dimensions");
  std::vector<ModelSelTrial> out(opt.trials);
  parallel_for(opt.trials, [&](std::size_t t) {
    SyntheticSpec spec;
    spec.dims = opt.dims;
    spec.ambient = opt.ambient;
    spec.samples_per_subspace = 100 * *std::max_element(opt.dims.begin(), opt.dims.end());
    spec.noise_sigma = opt.noise_sigma;
    spec.kind = opt.data_kind;
    spec.min_angle = opt.min_angle;
    spec.seed = derive_seed(opt.seed, "modelsel-data", t);
    const auto data = generate(spec);
    const auto start = std::chrono::steady_clock::now();
    const auto sel = select_model_order(data.cloud, spec.max_dim(), opt.k_max, FlatKind::Affine,
                                        derive_seed(opt.seed, "modelsel-method", t), opt.restarts);
    out[t] = {t, sel.elbow.k_opt, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
  });
  return out;
}

}  // namespace lbf
