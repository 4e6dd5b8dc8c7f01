#include "angenent/block_tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "angenent/errors.hpp"

namespace angenent {

namespace {

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> invert_pivot(const Eigen::Matrix<Scalar, 2, 2>& m, std::size_t k) {
  const Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double scale = m.squaredNorm();
  const double eps = std::numeric_limits<double>::epsilon();
  if (!std::isfinite(std::abs(det)) || !(std::abs(det) > 64.0 * eps * scale)) {
    throw SingularJacobian("singular pivot block at block row " + std::to_string(k));
  }
  Eigen::Matrix<Scalar, 2, 2> inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

}  // namespace

template <typename Scalar>
BlockTridiagonal<Scalar>::BlockTridiagonal(std::size_t n, bool cyclic)
    : cyclic_(cyclic), lower_(n, Block::Zero()), diag_(n, Block::Zero()), upper_(n, Block::Zero()) {
  if (n == 0) throw InvalidInput("block system needs at least one block");
  if (cyclic && n < 3) throw InvalidInput("cyclic block system needs at least three blocks");
}

template <typename Scalar>
void BlockTridiagonal<Scalar>::add_to_diagonal(Scalar shift) {
  for (auto& d : diag_) d += shift * Block::Identity();
}

template <typename Scalar>
auto BlockTridiagonal<Scalar>::multiply(const Vector& x) const -> Vector {
  const std::size_t n = blocks();
  Vector y = Vector::Zero(x.size());
  for (std::size_t k = 0; k < n; ++k) {
    auto yk = y.template segment<2>(2 * k);
    yk += diag_[k] * x.template segment<2>(2 * k);
    if (k > 0) {
      yk += lower_[k] * x.template segment<2>(2 * (k - 1));
    } else if (cyclic_) {
      yk += lower_[0] * x.template segment<2>(2 * (n - 1));
    }
    if (k + 1 < n) {
      yk += upper_[k] * x.template segment<2>(2 * (k + 1));
    } else if (cyclic_) {
      yk += upper_[n - 1] * x.template segment<2>(0);
    }
  }
  return y;
}

template <typename Scalar>
auto BlockTridiagonal<Scalar>::solve_tridiagonal(const DenseMatrix& rhs) const -> DenseMatrix {
  const std::size_t n = blocks();
  const Eigen::Index cols = rhs.cols();
  std::vector<Block> c(n);
  DenseMatrix d(rhs.rows(), cols);

  Block inv = invert_pivot<Scalar>(diag_[0], 0);
  if (n > 1) c[0] = inv * upper_[0];
  d.template middleRows<2>(0) = inv * rhs.template middleRows<2>(0);
  for (std::size_t k = 1; k < n; ++k) {
    const Block pivot = diag_[k] - lower_[k] * c[k - 1];
    inv = invert_pivot<Scalar>(pivot, k);
    if (k + 1 < n) c[k] = inv * upper_[k];
    d.template middleRows<2>(2 * k) =
        inv * (rhs.template middleRows<2>(2 * k) - lower_[k] * d.template middleRows<2>(2 * (k - 1)));
  }
  for (std::size_t k = n - 1; k-- > 0;) {
    d.template middleRows<2>(2 * k) -= c[k] * d.template middleRows<2>(2 * (k + 1));
  }
  return d;
}

template <typename Scalar>
auto BlockTridiagonal<Scalar>::solve(const Vector& rhs) const -> Vector {
  if (static_cast<std::size_t>(rhs.size()) != dimension()) {
    throw InvalidInput("right-hand side has the wrong dimension");
  }
  if (!cyclic_) return solve_tridiagonal(rhs);

  // A = T + U M U^T, where U selects block rows 0 and n-1 and M holds the corners.
  const std::size_t n = blocks();
  DenseMatrix stacked(dimension(), 5);
  stacked.setZero();
  stacked.col(0) = rhs;
  stacked.template block<2, 2>(0, 1) = Block::Identity();
  stacked.template block<2, 2>(2 * (n - 1), 3) = Block::Identity();
  const DenseMatrix solved = solve_tridiagonal(stacked);
  const Vector y = solved.col(0);
  const DenseMatrix z = solved.rightCols(4);

  Eigen::Matrix<Scalar, 4, 4> corners = Eigen::Matrix<Scalar, 4, 4>::Zero();
  corners.template block<2, 2>(0, 2) = lower_[0];
  corners.template block<2, 2>(2, 0) = upper_[n - 1];

  Eigen::Matrix<Scalar, 4, 4> ut_z;
  ut_z.template topRows<2>() = z.template middleRows<2>(0);
  ut_z.template bottomRows<2>() = z.template middleRows<2>(2 * (n - 1));
  Eigen::Matrix<Scalar, 4, 1> ut_y;
  ut_y << y.template segment<2>(0), y.template segment<2>(2 * (n - 1));

  const Eigen::Matrix<Scalar, 4, 4> capacitance = Eigen::Matrix<Scalar, 4, 4>::Identity() + corners * ut_z;
  Eigen::FullPivLU<Eigen::Matrix<Scalar, 4, 4>> lu(capacitance);
  if (!lu.isInvertible()) throw SingularJacobian("singular cyclic corner correction");
  const Eigen::Matrix<Scalar, 4, 1> w = lu.solve(corners * ut_y);
  Vector x = y - z * w;
  if (!x.allFinite()) throw SingularJacobian("non-finite solution of block system");
  return x;
}

template <typename Scalar>
auto BlockTridiagonal<Scalar>::to_dense() const -> DenseMatrix {
  const std::size_t n = blocks();
  DenseMatrix a = DenseMatrix::Zero(dimension(), dimension());
  for (std::size_t k = 0; k < n; ++k) {
    a.template block<2, 2>(2 * k, 2 * k) += diag_[k];
    if (k > 0) {
      a.template block<2, 2>(2 * k, 2 * (k - 1)) += lower_[k];
    } else if (cyclic_) {
      a.template block<2, 2>(0, 2 * (n - 1)) += lower_[0];
    }
    if (k + 1 < n) {
      a.template block<2, 2>(2 * k, 2 * (k + 1)) += upper_[k];
    } else if (cyclic_) {
      a.template block<2, 2>(2 * (n - 1), 0) += upper_[n - 1];
    }
  }
  return a;
}

template class BlockTridiagonal<double>;
template class BlockTridiagonal<std::complex<double>>;

}  // namespace angenent
