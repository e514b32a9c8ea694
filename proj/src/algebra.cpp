#include "zerotwo/algebra.hpp"

#include <cmath>

namespace zerotwo {

namespace {

std::vector<Matrix> build_block_basis(const BlockSpec& b) {
  const int n = b.dim;
  const double w = b.weight;
  std::vector<Matrix> out;
  out.reserve(static_cast<size_t>(n) * n);
  Matrix id = Matrix::Identity(n, n);
  out.push_back(id / std::sqrt(w * n));
  for (int l = 1; l < n; ++l) {
    Matrix d = Matrix::Zero(n, n);
    for (int j = 0; j < l; ++j) d(j, j) = 1.0;
    d(l, l) = -static_cast<double>(l);
    out.push_back(d / std::sqrt(w * l * (l + 1.0)));
  }
  const double s = 1.0 / std::sqrt(2.0 * w);
  for (int j = 0; j < n; ++j) {
    for (int m = j + 1; m < n; ++m) {
      Matrix sym = Matrix::Zero(n, n);
      sym(j, m) = s;
      sym(m, j) = s;
      out.push_back(sym);
      Matrix asym = Matrix::Zero(n, n);
      asym(m, j) = Complex(0.0, s);
      asym(j, m) = Complex(0.0, -s);
      out.push_back(asym);
    }
  }
  return out;
}

}  // namespace

AlgebraShape::AlgebraShape(std::vector<BlockSpec> blocks)
    : blocks_(std::move(blocks)) {
  require(!blocks_.empty(), ErrorCode::InvalidInput,
          "algebra needs at least one block");
  offsets_.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    require(b.dim >= 1, ErrorCode::InvalidInput, "block dimension must be >= 1");
    require(b.weight > 0.0, ErrorCode::InvalidInput,
            "trace weights must be strictly positive");
    offsets_.push_back(herm_dim_);
    herm_dim_ += b.dim * b.dim;
    trace_id_ += b.weight * b.dim;
    if (b.dim != 1) diagonal_ = false;
  }
  auto table = std::make_shared<std::vector<std::vector<Matrix>>>();
  table->reserve(blocks_.size());
  for (const auto& b : blocks_) table->push_back(build_block_basis(b));
  basis_ = std::move(table);
}

AlgebraShape AlgebraShape::single(int dim, double weight) {
  return AlgebraShape({BlockSpec{dim, weight}});
}

AlgebraShape AlgebraShape::diagonal(int states, double weight) {
  require(states >= 1, ErrorCode::InvalidInput, "need at least one state");
  std::vector<BlockSpec> blocks(static_cast<size_t>(states),
                                BlockSpec{1, weight});
  return AlgebraShape(std::move(blocks));
}

const Matrix& AlgebraShape::basis_matrix(int k, int j) const {
  return (*basis_)[static_cast<size_t>(k)][static_cast<size_t>(j)];
}

HermitianElement::HermitianElement(AlgebraShape shape,
                                   std::vector<Matrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  require(static_cast<int>(blocks_.size()) == shape_.block_count(),
          ErrorCode::InvalidInput, "block count mismatch");
  for (int k = 0; k < shape_.block_count(); ++k) {
    const int n = shape_.block(k).dim;
    require(blocks_[k].rows() == n && blocks_[k].cols() == n,
            ErrorCode::InvalidInput, "block size mismatch");
    blocks_[k] = 0.5 * (blocks_[k] + blocks_[k].adjoint().eval());
  }
}

HermitianElement HermitianElement::zero(const AlgebraShape& shape) {
  HermitianElement x;
  x.shape_ = shape;
  x.blocks_.reserve(shape.block_count());
  for (int k = 0; k < shape.block_count(); ++k)
    x.blocks_.push_back(Matrix::Zero(shape.block(k).dim, shape.block(k).dim));
  return x;
}

HermitianElement HermitianElement::identity(const AlgebraShape& shape) {
  HermitianElement x = zero(shape);
  for (int k = 0; k < shape.block_count(); ++k)
    x.blocks_[k] = Matrix::Identity(shape.block(k).dim, shape.block(k).dim);
  return x;
}

HermitianElement HermitianElement::from_coords(const AlgebraShape& shape,
                                               const RealVector& coords) {
  require(coords.size() == shape.herm_dim(), ErrorCode::InvalidInput,
          "coordinate length mismatch");
  HermitianElement x = zero(shape);
  for (int k = 0; k < shape.block_count(); ++k) {
    const int n = shape.block(k).dim;
    const int off = shape.herm_offset(k);
    for (int j = 0; j < n * n; ++j)
      x.blocks_[k] += coords[off + j] * shape.basis_matrix(k, j);
  }
  return x;
}

RealVector HermitianElement::coords() const {
  RealVector c(shape_.herm_dim());
  for (int k = 0; k < shape_.block_count(); ++k) {
    const int n = shape_.block(k).dim;
    const int off = shape_.herm_offset(k);
    const double w = shape_.block(k).weight;
    for (int j = 0; j < n * n; ++j) {
      // c_j = tau(B_j x); real since both factors are Hermitian
      c[off + j] =
          w * (shape_.basis_matrix(k, j) * blocks_[k]).trace().real();
    }
  }
  return c;
}

double HermitianElement::max_abs_entry() const {
  double m = 0.0;
  for (const auto& b : blocks_) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

HermitianElement HermitianElement::operator+(const HermitianElement& o) const {
  require(shape_ == o.shape_, ErrorCode::InvalidInput, "shape mismatch");
  HermitianElement x = *this;
  for (size_t k = 0; k < blocks_.size(); ++k) x.blocks_[k] += o.blocks_[k];
  return x;
}

HermitianElement HermitianElement::operator-(const HermitianElement& o) const {
  require(shape_ == o.shape_, ErrorCode::InvalidInput, "shape mismatch");
  HermitianElement x = *this;
  for (size_t k = 0; k < blocks_.size(); ++k) x.blocks_[k] -= o.blocks_[k];
  return x;
}

HermitianElement HermitianElement::operator*(double s) const {
  HermitianElement x = *this;
  for (auto& b : x.blocks_) b *= s;
  return x;
}

Matrix SpectralDecomposition::projection(int k, int i) const {
  const auto v = eigenvectors_[k].col(i);
  return v * v.adjoint();
}

HermitianElement SpectralDecomposition::reconstruct() const {
  HermitianElement x = HermitianElement::zero(shape_);
  for (int k = 0; k < shape_.block_count(); ++k) {
    const auto& vecs = eigenvectors_[k];
    x.blocks_[k] = vecs * eigenvalues_[k].asDiagonal() * vecs.adjoint();
    x.blocks_[k] = 0.5 * (x.blocks_[k] + x.blocks_[k].adjoint().eval());
  }
  return x;
}

double trace(const HermitianElement& x) {
  double t = 0.0;
  for (int k = 0; k < x.shape().block_count(); ++k)
    t += x.shape().block(k).weight * x.block(k).trace().real();
  return t;
}

SpectralDecomposition spectral(const HermitianElement& x) {
  SpectralDecomposition d;
  d.shape_ = x.shape();
  d.eigenvalues_.reserve(x.block_count());
  d.eigenvectors_.reserve(x.block_count());
  for (int k = 0; k < x.block_count(); ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(x.block(k));
    require(solver.info() == Eigen::Success, ErrorCode::NumericalFailure,
            "hermitian eigensolver did not converge");
    d.eigenvalues_.push_back(solver.eigenvalues());
    d.eigenvectors_.push_back(solver.eigenvectors());
  }
  return d;
}

HermitianElement abs(const HermitianElement& x) {
  SpectralDecomposition d = spectral(x);
  HermitianElement y = HermitianElement::zero(x.shape());
  for (int k = 0; k < x.block_count(); ++k) {
    RealVector lam = d.eigenvalues(k).cwiseAbs();
    const auto& vecs = d.eigenvectors(k);
    y.blocks_[k] = vecs * lam.asDiagonal() * vecs.adjoint();
    y.blocks_[k] = 0.5 * (y.blocks_[k] + y.blocks_[k].adjoint().eval());
  }
  return y;
}

RealVector hermitian_eigenvalues(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) {
    RealVector v(1);
    v[0] = m(0, 0).real();
    return v;
  }
  if (n == 2) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double half = 0.5 * (a - d);
    const double r = std::sqrt(half * half + std::norm(m(1, 0)));
    RealVector v(2);
    v[0] = mean - r;
    v[1] = mean + r;
    return v;
  }
  if (n == 3) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> s(
        Eigen::Matrix3cd(m), Eigen::EigenvaluesOnly);
    return s.eigenvalues();
  }
  if (n == 4) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> s(
        Eigen::Matrix4cd(m), Eigen::EigenvaluesOnly);
    require(s.info() == Eigen::Success, ErrorCode::NumericalFailure,
            "hermitian eigensolver did not converge");
    return s.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> s(m, Eigen::EigenvaluesOnly);
  require(s.info() == Eigen::Success, ErrorCode::NumericalFailure,
          "hermitian eigensolver did not converge");
  return s.eigenvalues();
}

double abs_eigenvalue_sum(const Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0).real());
  if (m.rows() == 2) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double half = 0.5 * (a - d);
    const double r = std::sqrt(half * half + std::norm(m(1, 0)));
    return std::abs(mean - r) + std::abs(mean + r);
  }
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

double trace_norm(const HermitianElement& x) {
  double t = 0.0;
  for (int k = 0; k < x.block_count(); ++k)
    t += x.shape().block(k).weight * abs_eigenvalue_sum(x.block(k));
  return t;
}

double sup_norm(const HermitianElement& x) {
  double m = 0.0;
  for (int k = 0; k < x.block_count(); ++k) {
    if (x.shape().block(k).dim == 1) {
      m = std::max(m, std::abs(x.block(k)(0, 0).real()));
    } else {
      RealVector lam = hermitian_eigenvalues(x.block(k));
      m = std::max(m, std::max(std::abs(lam[0]), std::abs(lam[lam.size() - 1])));
    }
  }
  return m;
}

HermitianElement extreme_point(const AlgebraShape& shape, int k,
                               const Vector& psi) {
  require(k >= 0 && k < shape.block_count(), ErrorCode::InvalidInput,
          "block index out of range");
  require(psi.size() == shape.block(k).dim, ErrorCode::InvalidInput,
          "vector length does not match block dimension");
  require(std::abs(psi.norm() - 1.0) <= 1e-12, ErrorCode::InvalidInput,
          "extreme points require a unit vector");
  Matrix p = (psi * psi.adjoint()) / shape.block(k).weight;
  std::vector<Matrix> blocks;
  for (int j = 0; j < shape.block_count(); ++j) {
    if (j == k)
      blocks.push_back(p);
    else
      blocks.push_back(Matrix::Zero(shape.block(j).dim, shape.block(j).dim));
  }
  return HermitianElement(shape, std::move(blocks));
}

}  // namespace zerotwo
