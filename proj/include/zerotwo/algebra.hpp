#ifndef ZEROTWO_ALGEBRA_HPP
#define ZEROTWO_ALGEBRA_HPP

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "zerotwo/errors.hpp"

namespace zerotwo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct BlockSpec {
  int dim = 1;         // matrix block size n_k >= 1
  double weight = 1.0; // trace mass w_k > 0, tau(x) = sum_k w_k tr(x_k)
  bool operator==(const BlockSpec& o) const {
    return dim == o.dim && weight == o.weight;
  }
};

// A finite-dimensional von Neumann algebra presented as a direct sum of
// full matrix blocks with a faithful weighted trace. The center is spanned
// by the block identities.
class AlgebraShape {
 public:
  explicit AlgebraShape(std::vector<BlockSpec> blocks);
  static AlgebraShape single(int dim, double weight = 1.0);
  // n one-dimensional blocks: the diagonal (classical) algebra C^n.
  static AlgebraShape diagonal(int states, double weight = 1.0);

  int block_count() const { return static_cast<int>(blocks_.size()); }
  const BlockSpec& block(int k) const { return blocks_[k]; }
  const std::vector<BlockSpec>& blocks() const { return blocks_; }

  // Real dimension of the self-adjoint part, sum of n_k^2.
  int herm_dim() const { return herm_dim_; }
  // Offset of block k's coordinates inside a herm_dim-long vector.
  int herm_offset(int k) const { return offsets_[k]; }
  double trace_of_identity() const { return trace_id_; }
  bool is_diagonal() const { return diagonal_; }

  bool operator==(const AlgebraShape& o) const { return blocks_ == o.blocks_; }
  bool operator!=(const AlgebraShape& o) const { return !(*this == o); }

  // tau-orthonormal Hermitian basis of block k. Ordering within a block of
  // size n: [0] identity/sqrt(w n); [1..n-1] diagonal ladder
  // (E_00+..+E_{l-1,l-1} - l E_ll)/sqrt(w l(l+1)); then for every pair
  // j < m in lexicographic order the symmetric (E_jm+E_mj)/sqrt(2w)
  // followed by the antisymmetric i(E_mj-E_jm)/sqrt(2w).
  const Matrix& basis_matrix(int k, int j) const;

 private:
  std::vector<BlockSpec> blocks_;
  std::vector<int> offsets_;
  int herm_dim_ = 0;
  double trace_id_ = 0.0;
  bool diagonal_ = true;
  // per block list of basis matrices, built once and shared across copies
  std::shared_ptr<const std::vector<std::vector<Matrix>>> basis_;
};

// An element of the self-adjoint part, stored blockwise. Construction
// symmetrizes with (x + x*)/2 so floating-point inputs are accepted.
class HermitianElement {
 public:
  HermitianElement(AlgebraShape shape, std::vector<Matrix> blocks);
  static HermitianElement zero(const AlgebraShape& shape);
  static HermitianElement identity(const AlgebraShape& shape);
  // Coordinates in the tau-orthonormal Hermitian basis (and back).
  static HermitianElement from_coords(const AlgebraShape& shape,
                                      const RealVector& coords);
  RealVector coords() const;

  const AlgebraShape& shape() const { return shape_; }
  const Matrix& block(int k) const { return blocks_[k]; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  double max_abs_entry() const;

  HermitianElement operator+(const HermitianElement& o) const;
  HermitianElement operator-(const HermitianElement& o) const;
  HermitianElement operator*(double s) const;

 private:
  HermitianElement() = default;
  AlgebraShape shape_{std::vector<BlockSpec>{{1, 1.0}}};
  std::vector<Matrix> blocks_;
  friend HermitianElement abs(const HermitianElement&);
  friend class SpectralDecomposition;
};

// Point-spectrum spectral data: per-block eigenvalues with orthonormal
// eigenvectors (columns). projection(k, i) is the rank-one e_i.
class SpectralDecomposition {
 public:
  const RealVector& eigenvalues(int k) const { return eigenvalues_[k]; }
  const Matrix& eigenvectors(int k) const { return eigenvectors_[k]; }
  Matrix projection(int k, int i) const;
  HermitianElement reconstruct() const;
  const AlgebraShape& shape() const { return shape_; }

 private:
  friend SpectralDecomposition spectral(const HermitianElement&);
  AlgebraShape shape_{std::vector<BlockSpec>{{1, 1.0}}};
  std::vector<RealVector> eigenvalues_;
  std::vector<Matrix> eigenvectors_;
};

double trace(const HermitianElement& x);
SpectralDecomposition spectral(const HermitianElement& x);
HermitianElement abs(const HermitianElement& x);
double trace_norm(const HermitianElement& x);
double sup_norm(const HermitianElement& x);

// The extreme point (1/w_k) psi psi* of the positive part of the unit ball,
// embedded in block k. psi must be a unit vector (within 1e-12).
HermitianElement extreme_point(const AlgebraShape& shape, int k,
                               const Vector& psi);

// Eigenvalues of a Hermitian matrix, ascending. Fixed-size fast paths for
// dims 1..4; the iterative solver otherwise.
RealVector hermitian_eigenvalues(const Matrix& m);
// Sum of |eigenvalue| of a Hermitian matrix (unweighted).
double abs_eigenvalue_sum(const Matrix& m);

}  // namespace zerotwo

#endif
