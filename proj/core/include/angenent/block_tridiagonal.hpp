#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace angenent {

/// Square matrix made of 2x2 blocks with nonzeros only on the block diagonal
/// and the first block off-diagonals, optionally with the two corner blocks
/// that make it cyclic.
///
/// Block row k holds lower(k) = A(k, k-1), diag(k) = A(k, k) and
/// upper(k) = A(k, k+1). In the cyclic case lower(0) is the corner A(0, n-1)
/// and upper(n-1) is the corner A(n-1, 0); otherwise those two are ignored.
///
/// Solves cost O(n): block Thomas elimination for the tridiagonal part and a
/// Sherman-Morrison-Woodbury correction of rank 4 for the corners.
template <typename Scalar>
class BlockTridiagonal {
 public:
  using Block = Eigen::Matrix<Scalar, 2, 2>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BlockTridiagonal(std::size_t n, bool cyclic);

  std::size_t blocks() const noexcept { return diag_.size(); }
  std::size_t dimension() const noexcept { return 2 * diag_.size(); }
  bool cyclic() const noexcept { return cyclic_; }

  Block& lower(std::size_t k) { return lower_[k]; }
  Block& diag(std::size_t k) { return diag_[k]; }
  Block& upper(std::size_t k) { return upper_[k]; }
  const Block& lower(std::size_t k) const { return lower_[k]; }
  const Block& diag(std::size_t k) const { return diag_[k]; }
  const Block& upper(std::size_t k) const { return upper_[k]; }

  /// Adds `shift` to every diagonal entry.
  void add_to_diagonal(Scalar shift);

  Vector multiply(const Vector& x) const;

  /// Solves A x = rhs. Throws SingularJacobian when a pivot block or the
  /// corner capacitance matrix is numerically singular.
  Vector solve(const Vector& rhs) const;

  DenseMatrix to_dense() const;

 private:
  // Solves the tridiagonal part (corners dropped) for several right-hand sides.
  DenseMatrix solve_tridiagonal(const DenseMatrix& rhs) const;

  bool cyclic_;
  std::vector<Block> lower_;
  std::vector<Block> diag_;
  std::vector<Block> upper_;
};

extern template class BlockTridiagonal<double>;
extern template class BlockTridiagonal<std::complex<double>>;

}  // namespace angenent
