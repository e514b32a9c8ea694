#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "zerotwo/algebra.hpp"

using namespace zerotwo;

namespace {

Matrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint().eval());
}

HermitianElement random_element(std::mt19937_64& rng,
                                const AlgebraShape& shape) {
  std::vector<Matrix> blocks;
  for (int k = 0; k < shape.block_count(); ++k)
    blocks.push_back(random_hermitian(rng, shape.block(k).dim));
  return HermitianElement(shape, std::move(blocks));
}

// Independent oracle: eigenvalues through the general (non-selfadjoint)
// solver, sorted ascending.
RealVector oracle_eigenvalues(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> s(m);
  RealVector v = s.eigenvalues().real();
  std::sort(v.begin(), v.end());
  return v;
}

const AlgebraShape kMixed({{2, 1.0}, {3, 0.5}, {1, 2.0}});

}  // namespace

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(AlgebraShape({{0, 1.0}}), Error);
  CHECK_THROWS_AS(AlgebraShape({{2, 0.0}}), Error);
  CHECK_THROWS_AS(AlgebraShape({{2, -1.0}}), Error);
  CHECK(AlgebraShape::diagonal(5).is_diagonal());
  CHECK(kMixed.herm_dim() == 4 + 9 + 1);
  CHECK(kMixed.trace_of_identity() == doctest::Approx(2.0 + 1.5 + 2.0));
}

TEST_CASE("basis is tau-orthonormal") {
  for (int k = 0; k < kMixed.block_count(); ++k) {
    const int n = kMixed.block(k).dim;
    const double w = kMixed.block(k).weight;
    for (int i = 0; i < n * n; ++i) {
      const Matrix& bi = kMixed.basis_matrix(k, i);
      CHECK((bi - bi.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-14);
      for (int j = 0; j < n * n; ++j) {
        const double ip = w * (bi * kMixed.basis_matrix(k, j)).trace().real();
        CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("coordinates round-trip") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    HermitianElement x = random_element(rng, kMixed);
    HermitianElement y = HermitianElement::from_coords(kMixed, x.coords());
    CHECK((x - y).max_abs_entry() < 1e-12);
  }
}

TEST_CASE("trace basics") {
  AlgebraShape one2 = AlgebraShape::single(2);
  Matrix d(2, 2);
  d << 2, 0, 0, -1;
  CHECK(trace(HermitianElement(one2, {d})) == doctest::Approx(1.0));

  AlgebraShape one3 = AlgebraShape::single(3, 2.0);
  CHECK(trace(HermitianElement::identity(one3)) == doctest::Approx(6.0));
}

TEST_CASE("trace matches spectral oracle") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 25; ++rep) {
    HermitianElement x = random_element(rng, kMixed);
    double expected = 0.0;
    for (int k = 0; k < x.block_count(); ++k)
      expected += kMixed.block(k).weight * oracle_eigenvalues(x.block(k)).sum();
    CHECK(trace(x) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("spectral decomposition") {
  AlgebraShape one2 = AlgebraShape::single(2);
  SpectralDecomposition d = spectral(HermitianElement::identity(one2));
  CHECK(d.eigenvalues(0)[0] == doctest::Approx(1.0));
  CHECK(d.eigenvalues(0)[1] == doctest::Approx(1.0));

  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  SpectralDecomposition d2 = spectral(HermitianElement(one2, {m}));
  CHECK(d2.eigenvalues(0)[0] == doctest::Approx(-1.0));
  CHECK(d2.eigenvalues(0)[1] == doctest::Approx(1.0));
  // coordinate projections
  CHECK(std::abs(d2.projection(0, 0)(1, 1).real() - 1.0) < 1e-12);
  CHECK(std::abs(d2.projection(0, 1)(0, 0).real() - 1.0) < 1e-12);

  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 25; ++rep) {
    HermitianElement x = random_element(rng, kMixed);
    SpectralDecomposition sd = spectral(x);
    CHECK((sd.reconstruct() - x).max_abs_entry() < 1e-10);
    // projections are orthonormal and sum to the block identity
    for (int k = 0; k < kMixed.block_count(); ++k) {
      const int n = kMixed.block(k).dim;
      Matrix sum = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) sum += sd.projection(k, i);
      CHECK((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("abs") {
  AlgebraShape one2 = AlgebraShape::single(2);
  Matrix m(2, 2);
  m << 3, 0, 0, -4;
  HermitianElement a = abs(HermitianElement(one2, {m}));
  CHECK(a.block(0)(0, 0).real() == doctest::Approx(3.0));
  CHECK(a.block(0)(1, 1).real() == doctest::Approx(4.0));

  CHECK(abs(HermitianElement::zero(kMixed)).max_abs_entry() < 1e-15);

  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 25; ++rep) {
    HermitianElement x = random_element(rng, kMixed);
    HermitianElement ax = abs(x);
    for (int k = 0; k < x.block_count(); ++k) {
      RealVector got = oracle_eigenvalues(ax.block(k));
      RealVector want = oracle_eigenvalues(x.block(k)).cwiseAbs();
      std::sort(want.begin(), want.end());
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-9);
    }
    // |x|^2 = x^2 and |x| >= 0
    for (int k = 0; k < x.block_count(); ++k) {
      Matrix lhs = ax.block(k) * ax.block(k);
      Matrix rhs = x.block(k) * x.block(k);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK(oracle_eigenvalues(ax.block(0))[0] > -1e-10);
  }
}

TEST_CASE("trace norm") {
  AlgebraShape one2 = AlgebraShape::single(2);
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  CHECK(trace_norm(HermitianElement(one2, {m})) == doctest::Approx(2.0));

  // rank-one projection in block k has trace norm w_k
  std::mt19937_64 rng(19);
  for (int k = 0; k < kMixed.block_count(); ++k) {
    const int n = kMixed.block(k).dim;
    std::normal_distribution<double> g(0.0, 1.0);
    Vector psi(n);
    for (int i = 0; i < n; ++i) psi[i] = Complex(g(rng), g(rng));
    psi /= psi.norm();
    std::vector<Matrix> blocks;
    for (int j = 0; j < kMixed.block_count(); ++j) {
      const int nj = kMixed.block(j).dim;
      blocks.push_back(j == k ? Matrix(psi * psi.adjoint())
                              : Matrix::Zero(nj, nj));
    }
    CHECK(trace_norm(HermitianElement(kMixed, blocks)) ==
          doctest::Approx(kMixed.block(k).weight).epsilon(1e-12));
  }

  for (int rep = 0; rep < 25; ++rep) {
    HermitianElement x = random_element(rng, kMixed);
    CHECK(trace_norm(x) == doctest::Approx(trace(abs(x))).epsilon(1e-10));
  }
}

TEST_CASE("norm axioms") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int rep = 0; rep < 40; ++rep) {
    HermitianElement x = random_element(rng, kMixed);
    HermitianElement y = random_element(rng, kMixed);
    const double a = unif(rng);
    CHECK(trace_norm(x * a) ==
          doctest::Approx(std::abs(a) * trace_norm(x)).epsilon(1e-9));
    CHECK(trace_norm(x + y) <= trace_norm(x) + trace_norm(y) + 1e-9);
  }
  CHECK(trace_norm(HermitianElement::zero(kMixed)) == 0.0);
}

TEST_CASE("positive cone compatibility") {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 25; ++rep) {
    HermitianElement x = random_element(rng, kMixed);
    HermitianElement pos = abs(x);  // positive by construction
    CHECK(trace_norm(pos) == doctest::Approx(trace(pos)).epsilon(1e-10));
    CHECK((abs(pos) - pos).max_abs_entry() < 1e-10);
  }
}

TEST_CASE("sup norm") {
  CHECK(sup_norm(HermitianElement::identity(kMixed)) == doctest::Approx(1.0));
  AlgebraShape one2 = AlgebraShape::single(2);
  Matrix m(2, 2);
  m << 0.3, 0, 0, -0.9;
  CHECK(sup_norm(HermitianElement(one2, {m})) == doctest::Approx(0.9));

  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 25; ++rep) {
    HermitianElement x = random_element(rng, kMixed);
    double expected = 0.0;
    for (int k = 0; k < x.block_count(); ++k) {
      RealVector lam = oracle_eigenvalues(x.block(k));
      expected = std::max(
          expected, std::max(std::abs(lam[0]), std::abs(lam[lam.size() - 1])));
    }
    CHECK(sup_norm(x) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("extreme points") {
  AlgebraShape one2 = AlgebraShape::single(2);
  Vector e0(2);
  e0 << 1, 0;
  HermitianElement p = extreme_point(one2, 0, e0);
  CHECK(p.block(0)(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(p.block(0)(1, 1)) < 1e-15);

  AlgebraShape heavy = AlgebraShape::single(2, 2.0);
  HermitianElement q = extreme_point(heavy, 0, e0);
  CHECK(q.block(0)(0, 0).real() == doctest::Approx(0.5));

  std::mt19937_64 rng(37);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < kMixed.block_count(); ++k) {
    const int n = kMixed.block(k).dim;
    Vector psi(n);
    for (int i = 0; i < n; ++i) psi[i] = Complex(g(rng), g(rng));
    psi /= psi.norm();
    CHECK(trace_norm(extreme_point(kMixed, k, psi)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  Vector bad(2);
  bad << 1, 1;  // not a unit vector
  CHECK_THROWS_AS(extreme_point(one2, 0, bad), Error);
}
