#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "lbf/data.hpp"

namespace lbf::datasets {

/// Three parallel planes z = 0, 0.2, 0.4 over the unit square, noiseless.
inline LabeledCloud parallel_planes(std::size_t per_plane, std::uint64_t seed) {
  Rng rng = make_rng(seed, "parallel-planes");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix pts(static_cast<Eigen::Index>(3 * per_plane), 3);
  std::vector<int> truth;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < per_plane; ++i) {
      const auto r = static_cast<Eigen::Index>(k * per_plane + i);
      pts(r, 0) = unit(rng);
      pts(r, 1) = unit(rng);
      pts(r, 2) = 0.2 * static_cast<double>(k);
      truth.push_back(static_cast<int>(k));
    }
  }
  LabeledCloud out;
  out.cloud = PointCloud(std::move(pts), truth);
  out.truth = std::move(truth);
  for (int k = 0; k < 3; ++k) {
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(3, 2);
    basis(0, 0) = 1.0;
    basis(1, 1) = 1.0;
    out.flats.emplace_back(basis, Vector::Unit(3, 2) * 0.2 * k, FlatKind::Affine);
  }
  out.spec.dims = {2, 2, 2};
  out.spec.ambient = 3;
  out.spec.samples_per_subspace = per_plane;
  out.spec.noise_sigma = 0.0;
  out.spec.seed = seed;
  return out;
}

/// Three random affine planes in R^3 with heavy noise (sigma 0.15) and 5%
/// outliers.
inline LabeledCloud noisy_affine_planes(std::size_t per_plane, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.dims = {2, 2, 2};
  spec.ambient = 3;
  spec.samples_per_subspace = per_plane;
  spec.noise_sigma = 0.15;
  spec.outlier_fraction = 0.05;
  spec.kind = FlatKind::Affine;
  spec.seed = seed;
  return generate(spec);
}

/// Three mutually orthogonal planes through the origin (the coordinate planes),
/// sampled over [-1, 1]^2 with small Gaussian noise. Each pair meets in a
/// coordinate axis.
inline LabeledCloud intersecting_planes(std::size_t per_plane, std::uint64_t seed, double sigma = 0.01) {
  Rng rng = make_rng(seed, "intersecting-planes");
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, sigma);
  Matrix pts(static_cast<Eigen::Index>(3 * per_plane), 3);
  std::vector<int> truth;
  LabeledCloud out;
  for (std::size_t k = 0; k < 3; ++k) {
    // Plane k is spanned by the two axes other than k.
    const auto a = static_cast<Eigen::Index>((k + 1) % 3);
    const auto b = static_cast<Eigen::Index>((k + 2) % 3);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(3, 2);
    basis(a, 0) = 1.0;
    basis(b, 1) = 1.0;
    out.flats.push_back(Flat::linear(basis));
    for (std::size_t i = 0; i < per_plane; ++i) {
      const auto r = static_cast<Eigen::Index>(k * per_plane + i);
      pts(r, a) = coord(rng);
      pts(r, b) = coord(rng);
      pts(r, static_cast<Eigen::Index>(k)) = 0.0;
      for (Eigen::Index c = 0; c < 3; ++c) pts(r, c) += noise(rng);
      truth.push_back(static_cast<int>(k));
    }
  }
  out.cloud = PointCloud(std::move(pts), truth);
  out.truth = std::move(truth);
  out.spec.dims = {2, 2, 2};
  out.spec.ambient = 3;
  out.spec.samples_per_subspace = per_plane;
  out.spec.noise_sigma = sigma;
  out.spec.kind = FlatKind::Linear;
  out.spec.seed = seed;
  return out;
}

/// Two parallel planar tubes in R^3: points uniform over [0, side]^2 in x, y
/// and uniform in [-width, width] around z = 0 and z = separation.
inline LabeledCloud parallel_tubes(std::size_t per_plane, double width, double separation, double side,
                                   std::uint64_t seed) {
  Rng rng = make_rng(seed, "parallel-tubes");
  std::uniform_real_distribution<double> coord(0.0, side);
  std::uniform_real_distribution<double> thick(-width, width);
  Matrix pts(static_cast<Eigen::Index>(2 * per_plane), 3);
  std::vector<int> truth;
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < per_plane; ++i) {
      const auto r = static_cast<Eigen::Index>(k * per_plane + i);
      pts(r, 0) = coord(rng);
      pts(r, 1) = coord(rng);
      pts(r, 2) = separation * static_cast<double>(k) + thick(rng);
      truth.push_back(static_cast<int>(k));
    }
  }
  LabeledCloud out;
  out.cloud = PointCloud(std::move(pts), truth);
  out.truth = std::move(truth);
  out.spec.dims = {2, 2};
  out.spec.ambient = 3;
  out.spec.samples_per_subspace = per_plane;
  out.spec.seed = seed;
  return out;
}

}  // namespace lbf::datasets
