#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lbf/geometry.hpp"
#include "lbf/rng.hpp"

namespace lbf {

/// How an outlier fraction f turns into an outlier count for n inliers.
enum class OutlierRule {
  FractionOfInliers,  // round(f * n)
  FractionOfTotal,    // round(f / (1 - f) * n): f is the share of the final data set
};

/// Hybrid linear model sampling protocol: K random flats, uniform samples in
/// the unit ball of each flat plus isotropic Gaussian noise, and uniform
/// outliers in the cube whose half-side is the largest inlier norm.
struct SyntheticSpec {
  std::vector<std::size_t> dims{2, 2};
  std::size_t ambient = 4;
  std::size_t samples_per_subspace = 250;
  double noise_sigma = 0.05;
  double outlier_fraction = 0.0;
  OutlierRule outlier_rule = OutlierRule::FractionOfInliers;
  FlatKind kind = FlatKind::Affine;
  std::optional<double> min_angle;  // radians
  std::uint64_t seed = 0;
  std::size_t max_angle_retries = 10000;

  std::size_t inlier_count() const { return dims.size() * samples_per_subspace; }

  std::size_t outlier_count() const {
    const double n = static_cast<double>(inlier_count());
    const double f = outlier_fraction;
    return static_cast<std::size_t>(
        std::llround(outlier_rule == OutlierRule::FractionOfInliers ? f * n : f / (1.0 - f) * n));
  }

  std::size_t max_dim() const { return dims.empty() ? 0 : *std::max_element(dims.begin(), dims.end()); }

  void validate() const {
    require(!dims.empty(), "at least one subspace is required");
    require(ambient >= 1, "ambient dimension must be >= 1");
    require(max_dim() < ambient, "subspace dimension must be < ambient dimension");
    require(samples_per_subspace >= 1, "samples per subspace must be >= 1");
    require(noise_sigma >= 0.0, "noise sigma must be >= 0");
    require(outlier_fraction >= 0.0 && outlier_fraction < 1.0, "outlier fraction must lie in [0, 1)");
    if (min_angle) require(*min_angle >= 0.0 && *min_angle <= std::numbers::pi / 2, "min angle must lie in [0, pi/2]");
  }
};

struct LabeledCloud {
  PointCloud cloud;
  std::vector<int> truth;  // subspace index, or kOutlierLabel
  std::vector<Flat> flats;  // generating flats
  SyntheticSpec spec;
};

/// Smallest principal angle between the direction spaces of two flats,
/// ignoring the max(0, d1 + d2 - D) angles that are zero for any pair of
/// subspaces of these dimensions. For two planes in R^3 this is the dihedral
/// angle.
inline double separation_angle(const Eigen::MatrixXd& b1, const Eigen::MatrixXd& b2) {
  const auto D = b1.rows();
  const auto forced = std::max<Eigen::Index>(0, b1.cols() + b2.cols() - D);
  const Vector angles = principal_angles(b1, b2);
  if (forced >= angles.size()) return std::numbers::pi / 2;
  return angles[forced];
}

/// Uniform sample from the unit ball in R^n.
inline Vector sample_unit_ball(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  if (n == 0) return v;
  do {
    for (auto& x : v) x = gauss(rng);
  } while (v.norm() == 0.0);
  const double r = std::pow(unif(rng), 1.0 / static_cast<double>(n));
  return v * (r / v.norm());
}

/// Orthonormal D x d basis of a uniformly random d-dimensional subspace.
inline Eigen::MatrixXd random_basis(std::size_t D, std::size_t d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(d));
  for (auto& x : g.reshaped()) x = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
  return q;
}

inline std::vector<Flat> random_flats(const SyntheticSpec& spec, Rng& rng) {
  std::vector<Flat> flats;
  for (std::size_t i = 0; i < spec.dims.size(); ++i) {
    Eigen::MatrixXd basis = random_basis(spec.ambient, spec.dims[i], rng);
    if (spec.kind == FlatKind::Affine) {
      flats.emplace_back(std::move(basis), sample_unit_ball(spec.ambient, rng), FlatKind::Affine);
    } else {
      flats.push_back(Flat::linear(std::move(basis)));
    }
  }
  return flats;
}

/// Draws a labeled hybrid-linear data set. Inliers come first, grouped by
/// subspace, followed by the outliers.
inline LabeledCloud generate(const SyntheticSpec& spec) {
  spec.validate();
  Rng flat_rng = make_rng(spec.seed, "flats");
  Rng sample_rng = make_rng(spec.seed, "samples");
  Rng outlier_rng = make_rng(spec.seed, "outliers");

  std::vector<Flat> flats;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt >= spec.max_angle_retries) {
      throw Error(ErrorKind::Infeasible, "angle constraint infeasible after " + std::to_string(attempt) + " draws");
    }
    flats = random_flats(spec, flat_rng);
    if (!spec.min_angle) break;
    bool ok = true;
    for (std::size_t i = 0; i < flats.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < flats.size() && ok; ++j) {
        ok = separation_angle(flats[i].basis(), flats[j].basis()) >= *spec.min_angle;
      }
    }
    if (ok) break;
  }

  const std::size_t n_in = spec.inlier_count();
  const std::size_t n_out = spec.outlier_count();
  const auto D = static_cast<Eigen::Index>(spec.ambient);
  Matrix pts(static_cast<Eigen::Index>(n_in + n_out), D);
  std::vector<int> truth;
  truth.reserve(n_in + n_out);

  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < flats.size(); ++k) {
    for (std::size_t s = 0; s < spec.samples_per_subspace; ++s, ++row) {
      Vector p = flats[k].offset() + flats[k].basis() * sample_unit_ball(spec.dims[k], sample_rng);
      for (auto& x : p) x += spec.noise_sigma * noise(sample_rng);
      pts.row(row) = p.transpose();
      truth.push_back(static_cast<int>(k));
    }
  }

  if (n_out > 0) {
    const double half_side = pts.topRows(static_cast<Eigen::Index>(n_in)).rowwise().norm().maxCoeff();
    std::uniform_real_distribution<double> cube(-half_side, half_side);
    for (std::size_t o = 0; o < n_out; ++o, ++row) {
      for (Eigen::Index c = 0; c < D; ++c) pts(row, c) = cube(outlier_rng);
      truth.push_back(kOutlierLabel);
    }
  }

  LabeledCloud out{PointCloud(std::move(pts), truth), std::move(truth), std::move(flats), spec};
  return out;
}

}  // namespace lbf
