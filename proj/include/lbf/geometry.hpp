#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lbf/error.hpp"

namespace lbf {

/// Row-major so that each point is a contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class FlatKind { Affine, Linear };

inline const char* to_string(FlatKind kind) { return kind == FlatKind::Affine ? "affine" : "linear"; }

/// Label reserved for outliers in ground-truth label vectors.
inline constexpr int kOutlierLabel = -1;

/// N points in R^D, optionally with ground-truth labels.
class PointCloud {
public:
  PointCloud() = default;

  explicit PointCloud(Matrix points, std::optional<std::vector<int>> labels = std::nullopt)
      : points_(std::move(points)), labels_(std::move(labels)) {
    require(points_.rows() >= 1 && points_.cols() >= 1, "point cloud must have N >= 1 and D >= 1");
    require(points_.allFinite(), "point cloud contains non-finite coordinates", ErrorKind::Parse);
    if (labels_) {
      require(labels_->size() == size(), "label count " + std::to_string(labels_->size()) +
                                             " does not match point count " + std::to_string(size()));
    }
  }

  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t ambient_dim() const { return static_cast<std::size_t>(points_.cols()); }

  const Matrix& points() const { return points_; }
  auto point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)); }

  const std::optional<std::vector<int>>& labels() const { return labels_; }
  void set_labels(std::vector<int> labels) {
    require(labels.size() == size(), "label count does not match point count");
    labels_ = std::move(labels);
  }

  /// Rows selected by index, in the given order.
  Matrix gather(std::span<const std::size_t> indices) const {
    Matrix out(static_cast<Eigen::Index>(indices.size()), points_.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
      out.row(static_cast<Eigen::Index>(r)) = points_.row(static_cast<Eigen::Index>(indices[r]));
    }
    return out;
  }

private:
  Matrix points_;
  std::optional<std::vector<int>> labels_;
};

/// A d-dimensional affine or linear subspace of R^D, stored as an orthonormal
/// basis (D x d, one direction per column) and an offset point.
class Flat {
public:
  static constexpr double kOrthonormalTol = 1e-10;

  Flat() = default;

  Flat(Eigen::MatrixXd basis, Vector offset, FlatKind kind)
      : basis_(std::move(basis)), offset_(std::move(offset)), kind_(kind) {
    const auto D = offset_.size();
    require(D >= 1, "flat ambient dimension must be positive");
    require(basis_.rows() == D, "flat basis rows must equal the ambient dimension");
    require(basis_.cols() < D, "dimension out of range: flat dimension must be < ambient dimension");
    if (kind_ == FlatKind::Linear) {
      require(offset_.isZero(0.0), "linear flat must have a zero offset");
    }
    if (basis_.cols() > 0) {
      const Eigen::MatrixXd gram = basis_.transpose() * basis_;
      const double dev = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
      require(dev < kOrthonormalTol, "flat basis is not orthonormal (deviation " + std::to_string(dev) + ")");
    }
  }

  static Flat linear(Eigen::MatrixXd basis) {
    const auto D = basis.rows();
    return Flat(std::move(basis), Vector::Zero(D), FlatKind::Linear);
  }

  std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
  std::size_t ambient_dim() const { return static_cast<std::size_t>(offset_.size()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Vector& offset() const { return offset_; }
  FlatKind kind() const { return kind_; }

  bool operator==(const Flat&) const = default;

private:
  Eigen::MatrixXd basis_;
  Vector offset_;
  FlatKind kind_ = FlatKind::Affine;
};

/// Best-fit flat together with its residual sum of squared distances.
struct FlatFit {
  Flat flat;
  double residual = 0.0;
};

namespace detail {

inline void check_fit_args(Eigen::Index n, Eigen::Index D, std::size_t d) {
  require(n >= 1, "empty neighborhood");
  require(static_cast<Eigen::Index>(d) < D, "dimension out of range: d=" + std::to_string(d) +
                                                " must be < D=" + std::to_string(D));
}

// Centered (Affine) or raw (Linear) data, plus the offset that was removed.
inline std::pair<Eigen::MatrixXd, Vector> fit_frame(const Matrix& pts, FlatKind kind) {
  if (kind == FlatKind::Linear) return {Eigen::MatrixXd(pts), Vector::Zero(pts.cols())};
  Vector centroid = pts.colwise().mean().transpose();
  Eigen::MatrixXd centered = pts.rowwise() - centroid.transpose();
  return {std::move(centered), std::move(centroid)};
}

template <class Derived>
Vector to_vector(const Eigen::MatrixBase<Derived>& x) {
  Vector v(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) v[i] = x(i);
  return v;
}

/// Singular values (descending) only. LAPACK's divide-and-conquer routine is
/// faster from about six columns up; below that QR plus Jacobi wins.
inline Vector singular_values(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  const Eigen::Index D = a.cols();
  if (D >= 6) {
    Vector s(std::min(n, D));
    const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n),
                                           static_cast<lapack_int>(D), a.data(), static_cast<lapack_int>(n), s.data(),
                                           nullptr, 1, nullptr, 1);
    if (info == 0) return s;
  }
  if (n > D) {
    Eigen::HouseholderQR<Eigen::Ref<Eigen::MatrixXd>> qr(a);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(D).triangularView<Eigen::Upper>();
    return Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
  }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
}

inline double tail_energy(const Vector& singular, std::size_t d) {
  double sum = 0.0;
  for (Eigen::Index i = static_cast<Eigen::Index>(d); i < singular.size(); ++i) sum += singular[i] * singular[i];
  return sum;
}

}  // namespace detail

/// l2-optimal d-flat through the rows of `pts`. Affine fits use the top d
/// principal directions about the centroid; linear fits use the top d right
/// singular vectors of the uncentered data. With fewer than d+1 points the
/// basis is completed by further right singular vectors, which span directions
/// with zero singular value.
inline FlatFit best_fit(const Matrix& pts, std::size_t d, FlatKind kind) {
  detail::check_fit_args(pts.rows(), pts.cols(), d);
  auto [frame, offset] = detail::fit_frame(pts, kind);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(frame, Eigen::ComputeFullV);
  Eigen::MatrixXd basis = svd.matrixV().leftCols(static_cast<Eigen::Index>(d));
  const double residual = detail::tail_energy(svd.singularValues(), d);
  return {Flat(std::move(basis), std::move(offset), kind), residual};
}

inline Flat best_fit_flat(const Matrix& pts, std::size_t d, FlatKind kind) { return best_fit(pts, d, kind).flat; }

inline Flat best_fit_flat(const PointCloud& cloud, std::span<const std::size_t> indices, std::size_t d,
                          FlatKind kind) {
  require(!indices.empty(), "empty neighborhood");
  return best_fit_flat(cloud.gather(indices), d, kind);
}

/// Residual sum of squares of the best-fit d-flat, from singular values only.
inline double fit_residual(const Matrix& pts, std::size_t d, FlatKind kind) {
  detail::check_fit_args(pts.rows(), pts.cols(), d);
  auto [frame, offset] = detail::fit_frame(pts, kind);
  return detail::tail_energy(detail::singular_values(std::move(frame)), d);
}

template <class Derived>
Vector project_to_flat(const Eigen::MatrixBase<Derived>& x, const Flat& flat) {
  require(static_cast<std::size_t>(x.size()) == flat.ambient_dim(), "dimension mismatch between point and flat");
  const Vector rel = detail::to_vector(x) - flat.offset();
  return flat.offset() + flat.basis() * (flat.basis().transpose() * rel);
}

/// Euclidean distance from x to its orthogonal projection onto the flat.
template <class Derived>
double dist_to_flat(const Eigen::MatrixBase<Derived>& x, const Flat& flat) {
  const Vector xv = detail::to_vector(x);
  return (xv - project_to_flat(xv, flat)).norm();
}

/// Distances of every point of the cloud to one flat.
inline Vector distances_to_flat(const PointCloud& cloud, const Flat& flat) {
  require(cloud.ambient_dim() == flat.ambient_dim(), "dimension mismatch between cloud and flat");
  const Eigen::Index D = flat.basis().rows();
  const Eigen::Index d = flat.basis().cols();
  if (d > 0 && D - d < d) {
    // project onto the orthogonal complement instead
    const Eigen::MatrixXd q = flat.basis().householderQr().householderQ();
    const Eigen::MatrixXd normal = q.rightCols(D - d);
    Eigen::MatrixXd coords = cloud.points() * normal;
    coords.rowwise() -= (flat.offset().transpose() * normal);
    return coords.rowwise().norm();
  }
  const Eigen::MatrixXd rel = cloud.points().rowwise() - flat.offset().transpose();
  const Eigen::MatrixXd coords = rel * flat.basis();
  const Eigen::MatrixXd residual = rel - coords * flat.basis().transpose();
  return residual.rowwise().norm();
}

/// Principal angles (ascending, radians) between the direction spaces of two
/// orthonormal bases, from the singular values of B1^T B2.
inline Vector principal_angles(const Eigen::MatrixXd& b1, const Eigen::MatrixXd& b2) {
  require(b1.rows() == b2.rows(), "dimension mismatch between bases");
  if (b1.cols() == 0 || b2.cols() == 0) return Vector();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b1.transpose() * b2);
  Vector s = svd.singularValues();  // descending cosines -> ascending angles
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::acos(std::clamp(s[i], -1.0, 1.0));
  return s;
}

}  // namespace lbf
