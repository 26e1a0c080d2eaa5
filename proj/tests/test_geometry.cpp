#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <Eigen/QR>

#include "generators.hpp"
#include "lbf/geometry.hpp"
#include "lbf/knn.hpp"

using namespace lbf;
using lbf::testing::gaussian_matrix;
using lbf::testing::gaussian_vector;

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

double sum_sq_dist(const Matrix& pts, const Flat& f) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) s += std::pow(dist_to_flat(pts.row(i), f), 2);
  return s;
}

// Plane through the centroid with unit normal n; minimum over a dense grid of normals.
double grid_plane_residual(const Matrix& pts) {
  const Eigen::RowVectorXd c = pts.colwise().mean();
  const Matrix centered = pts.rowwise() - c;
  double best = std::numeric_limits<double>::infinity();
  const int nt = 600, np = 2400;
  for (int a = 0; a <= nt; ++a) {
    const double theta = std::numbers::pi / 2 * a / nt;
    for (int b = 0; b < np; ++b) {
      const double phi = 2 * std::numbers::pi * b / np;
      Eigen::Vector3d n(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
      best = std::min(best, (centered * n).squaredNorm());
    }
  }
  return best;
}

// Projection by solving the least-squares problem min_c ||B c - (x - o)||.
Vector lsq_projection(const Vector& x, const Flat& f) {
  const Vector rel = x - f.offset();
  const Vector c = f.basis().colPivHouseholderQr().solve(rel);
  return f.offset() + f.basis() * c;
}

}  // namespace

TEST(BestFit, CollinearPoints) {
  const auto fit = best_fit(rows({{0, 0}, {1, 0}, {2, 0}}), 1, FlatKind::Affine);
  EXPECT_NEAR(fit.residual, 0.0, 1e-14);
  EXPECT_NEAR(fit.flat.offset()[0], 1.0, 1e-14);
  EXPECT_NEAR(fit.flat.offset()[1], 0.0, 1e-14);
  EXPECT_NEAR(std::abs(fit.flat.basis()(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(fit.flat.basis()(1, 0), 0.0, 1e-14);
}

TEST(BestFit, RightTriangleResidualIsOneThird) {
  const auto fit = best_fit(rows({{0, 0}, {1, 0}, {0, 1}}), 1, FlatKind::Affine);
  EXPECT_NEAR(fit.flat.offset()[0], 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(fit.flat.offset()[1], 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(fit.residual, 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(sum_sq_dist(rows({{0, 0}, {1, 0}, {0, 1}}), fit.flat), 1.0 / 3.0, 1e-14);
}

TEST(BestFit, MatchesGridSearchOverNormals) {
  Rng rng(11);
  for (int t = 0; t < 3; ++t) {
    const Matrix pts = gaussian_matrix(6, 3, rng);
    const double ours = fit_residual(pts, 2, FlatKind::Affine);
    const double grid = grid_plane_residual(pts);
    EXPECT_LE(ours, grid + 1e-12);
    EXPECT_NEAR(ours, grid, 1e-3);
  }
}

TEST(BestFit, LinearFitIsUncentered) {
  const Matrix pts = rows({{1, 1}, {2, 2}, {3, 3}});
  const auto lin = best_fit(pts, 1, FlatKind::Linear);
  EXPECT_TRUE(lin.flat.offset().isZero());
  EXPECT_NEAR(lin.residual, 0.0, 1e-12);
  const auto shifted = best_fit(rows({{1, 2}, {2, 3}, {3, 4}}), 1, FlatKind::Linear);
  EXPECT_GT(shifted.residual, 0.01);
}

TEST(BestFit, ResidualEqualsSumOfDistances) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const std::size_t D = 2 + t % 6, d = t % (D - 1) + 1;
    const Matrix pts = gaussian_matrix(4 + t % 20, D, rng);
    for (auto kind : {FlatKind::Affine, FlatKind::Linear}) {
      const auto fit = best_fit(pts, d, kind);
      EXPECT_NEAR(fit.residual, sum_sq_dist(pts, fit.flat), 1e-10 * (1 + fit.residual));
      EXPECT_NEAR(fit.residual, fit_residual(pts, d, kind), 1e-10 * (1 + fit.residual));
    }
  }
}

TEST(BestFit, OptimalAgainstRandomCompetitors) {
  Rng rng(5);
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t D = 3 + inst % 3, d = 1 + inst % 2;
    for (auto kind : {FlatKind::Affine, FlatKind::Linear}) {
      const Flat truth = lbf::testing::random_flat(D, d, kind, rng);
      const Matrix pts = lbf::testing::points_near(truth, 30, 0.2, rng);
      const double best = best_fit(pts, d, kind).residual;
      for (int c = 0; c < 1000; ++c) {
        // Competitors: perturbations of the truth and fully random flats.
        Flat other = lbf::testing::random_flat(D, d, kind, rng);
        if (c % 2 == 0) {
          Eigen::MatrixXd b = truth.basis() + 0.1 * Eigen::MatrixXd(gaussian_matrix(D, d, rng));
          Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
          b = qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(d));
          Vector off = kind == FlatKind::Affine ? Vector(truth.offset() + 0.1 * gaussian_vector(D, rng))
                                                : Vector(Vector::Zero(static_cast<Eigen::Index>(D)));
          other = Flat(b, off, kind);
        }
        ASSERT_LE(best, sum_sq_dist(pts, other) + 1e-10);
      }
    }
  }
}

TEST(BestFit, Errors) {
  EXPECT_THROW(best_fit(Matrix(0, 3), 1, FlatKind::Affine), Error);
  EXPECT_THROW(best_fit(rows({{0, 0}, {1, 1}}), 2, FlatKind::Affine), Error);
  try {
    best_fit(rows({{0, 0}, {1, 1}}), 2, FlatKind::Affine);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("dimension out of range"), std::string::npos);
  }
  try {
    best_fit(Matrix(0, 3), 1, FlatKind::Affine);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("empty neighborhood"), std::string::npos);
  }
}

TEST(BestFit, FewerPointsThanDimensionStillFits) {
  const auto fit = best_fit(rows({{1, 2, 3, 4}}), 2, FlatKind::Affine);
  EXPECT_EQ(fit.flat.dim(), 2u);
  EXPECT_NEAR(fit.residual, 0.0, 1e-14);
}

TEST(BestFit, RigidMotionEquivariance) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const Matrix pts = gaussian_matrix(25, 4, rng);
    const auto R = lbf::testing::rotation(4, rng);
    const Vector tr = gaussian_vector(4, rng, 3.0);
    const Matrix moved = lbf::testing::rigid(pts, R, tr);
    const auto a = best_fit(pts, 2, FlatKind::Affine);
    const auto b = best_fit(moved, 2, FlatKind::Affine);
    EXPECT_NEAR(a.residual, b.residual, 1e-9);
    EXPECT_TRUE((R * a.flat.offset() + tr).isApprox(b.flat.offset(), 1e-10));
    // Same subspace: projectors agree.
    const Eigen::MatrixXd Ra = R * a.flat.basis();
    EXPECT_TRUE((Ra * Ra.transpose()).isApprox(b.flat.basis() * b.flat.basis().transpose(), 1e-8));
  }
}

TEST(BestFit, ScalingAboutCentroid) {
  Rng rng(9);
  const Matrix pts = gaussian_matrix(20, 3, rng);
  const auto a = best_fit(pts, 1, FlatKind::Affine);
  const Eigen::RowVectorXd c = pts.colwise().mean();
  const double s = 2.5;
  Matrix scaled = ((pts.rowwise() - c) * s).rowwise() + c;
  const auto b = best_fit(scaled, 1, FlatKind::Affine);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    EXPECT_NEAR(dist_to_flat(scaled.row(i), b.flat), s * dist_to_flat(pts.row(i), a.flat), 1e-10);
  }
}

TEST(DistToFlat, Examples) {
  Eigen::MatrixXd xy = Eigen::MatrixXd::Zero(3, 2);
  xy(0, 0) = 1;
  xy(1, 1) = 1;
  const Flat plane(xy, Vector::Zero(3), FlatKind::Affine);
  EXPECT_DOUBLE_EQ(dist_to_flat(Eigen::Vector3d(0, 0, 1), plane), 1.0);
  EXPECT_DOUBLE_EQ(dist_to_flat(Eigen::Vector3d(0.3, -2, 0), plane), 0.0);

  Eigen::MatrixXd xaxis = Eigen::MatrixXd::Zero(2, 1);
  xaxis(0, 0) = 1;
  const Flat line(xaxis, Vector::Zero(2), FlatKind::Affine);
  const Vector p = project_to_flat(Eigen::Vector2d(1, 1), line);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_DOUBLE_EQ(p[1], 0.0);
  EXPECT_THROW(dist_to_flat(Eigen::Vector2d(1, 1), plane), Error);
}

TEST(DistToFlat, MatchesLeastSquaresOracle) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + t % 4;
    const Flat f = lbf::testing::random_flat(5, d, t % 2 ? FlatKind::Affine : FlatKind::Linear, rng);
    const Vector x = gaussian_vector(5, rng, 2.0);
    const Vector oracle = lsq_projection(x, f);
    EXPECT_NEAR(dist_to_flat(x, f), (x - oracle).norm(), 1e-12);
    const Vector p = project_to_flat(x, f);
    EXPECT_LT((f.basis().transpose() * (x - p)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((p - project_to_flat(p, f)).norm(), 1e-12);
    EXPECT_EQ(dist_to_flat(x, f), (x - project_to_flat(x, f)).norm());
  }
}

TEST(DistToFlat, BatchMatchesSingle) {
  Rng rng(4);
  const PointCloud cloud(gaussian_matrix(100, 6, rng));
  const Flat f = lbf::testing::random_flat(6, 3, FlatKind::Affine, rng);
  const Vector all = distances_to_flat(cloud, f);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    EXPECT_NEAR(all[static_cast<Eigen::Index>(i)], dist_to_flat(cloud.point(i), f), 1e-12);
  }
}

TEST(DistToFlat, InvariantUnderJointRigidMotion) {
  Rng rng(30);
  for (int t = 0; t < 50; ++t) {
    const Flat f = lbf::testing::random_flat(4, 2, FlatKind::Affine, rng);
    const Vector x = gaussian_vector(4, rng);
    const auto R = lbf::testing::rotation(4, rng);
    const Vector tr = gaussian_vector(4, rng);
    const Flat g(R * f.basis(), R * f.offset() + tr, FlatKind::Affine);
    EXPECT_NEAR(dist_to_flat(x, f), dist_to_flat(Vector(R * x + tr), g), 1e-12);
  }
}

TEST(Flat, Validation) {
  EXPECT_THROW(Flat(Eigen::MatrixXd::Ones(3, 1), Vector::Zero(3), FlatKind::Affine), Error);
  EXPECT_THROW(Flat(Eigen::MatrixXd::Identity(3, 3), Vector::Zero(3), FlatKind::Affine), Error);
  EXPECT_THROW(Flat(Eigen::MatrixXd::Identity(3, 1), Vector::Ones(3), FlatKind::Linear), Error);
}

TEST(PointCloud, Validation) {
  Matrix bad = Matrix::Zero(2, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(PointCloud{bad}, Error);
  EXPECT_THROW(PointCloud(Matrix::Zero(2, 2), std::vector<int>{1}), Error);
  const PointCloud ok(Matrix::Zero(3, 2), std::vector<int>{0, 1, -1});
  EXPECT_EQ(ok.size(), 3u);
  EXPECT_EQ(ok.ambient_dim(), 2u);
}

TEST(PrincipalAngles, OrthogonalAndEqual) {
  const Eigen::MatrixXd e1 = Eigen::MatrixXd::Identity(3, 1);
  Eigen::MatrixXd e2 = Eigen::MatrixXd::Zero(3, 1);
  e2(1, 0) = 1;
  EXPECT_NEAR(principal_angles(e1, e2)[0], std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(principal_angles(e1, e1)[0], 0.0, 1e-7);
}

TEST(Knn, OrderAndTies) {
  const PointCloud cloud(rows({{2, 0}, {1, 0}, {-1, 0}, {0, 3}}));
  const auto nn = nearest_neighbors(cloud, Eigen::Vector2d(0, 0), 3);
  ASSERT_EQ(nn.size(), 3u);
  EXPECT_EQ(nn[0], 1u);
  EXPECT_EQ(nn[1], 2u);
  EXPECT_EQ(nn[2], 0u);
  const auto all = neighbor_order(cloud, Eigen::Vector2d(0, 0));
  EXPECT_EQ(all.back(), 3u);
}

TEST(Knn, MatchesFullSort) {
  Rng rng(77);
  const PointCloud cloud(gaussian_matrix(200, 3, rng));
  const Vector q = gaussian_vector(3, rng);
  const auto all = neighbor_order(cloud, q);
  for (std::size_t k : {1u, 5u, 50u, 200u}) {
    const auto nn = nearest_neighbors(cloud, q, k);
    EXPECT_TRUE(std::equal(nn.begin(), nn.end(), all.begin()));
  }
  for (std::size_t i = 1; i < all.size(); ++i) {
    EXPECT_LE((cloud.point(all[i - 1]).transpose() - q).norm(), (cloud.point(all[i]).transpose() - q).norm());
  }
}
