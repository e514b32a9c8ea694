// Test-side oracles, independent of the optimizer paths they check.
#ifndef ZEROTWO_TESTS_ORACLES_HPP
#define ZEROTWO_TESTS_ORACLES_HPP

#include <random>

#include "zerotwo/algebra.hpp"
#include "zerotwo/superop.hpp"

namespace zerotwo::oracles {

inline Vector random_unit_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v / v.norm();
}

// Sphere maximization of ||delta(psi psi*)||_1 / w_k by pure sampling:
// uniform exploration followed by rounds of shrinking Gaussian
// perturbation around the incumbent. Derivative-free and independent of
// the library's gradient/grid machinery.
inline double sphere_search_block(const SuperOperator& delta, int block,
                                  int budget, std::uint64_t seed) {
  const AlgebraShape& dom = delta.domain();
  const int n = dom.block(block).dim;
  std::mt19937_64 rng(seed + 1315423911ULL * (block + 1));
  auto value = [&](const Vector& psi) {
    return trace_norm(delta.apply(extreme_point(dom, block, psi)));
  };
  Vector best_psi = random_unit_vector(rng, n);
  double best = value(best_psi);
  const int explore = budget * 2 / 5;
  for (int i = 0; i < explore; ++i) {
    Vector psi = random_unit_vector(rng, n);
    const double f = value(psi);
    if (f > best) {
      best = f;
      best_psi = psi;
    }
  }
  const int rounds = 6;
  const int per_round = (budget - explore) / rounds;
  double sigma = 0.1;
  std::normal_distribution<double> g(0.0, 1.0);
  for (int r = 0; r < rounds; ++r) {
    for (int i = 0; i < per_round; ++i) {
      Vector psi = best_psi;
      for (int j = 0; j < n; ++j) psi[j] += sigma * Complex(g(rng), g(rng));
      psi /= psi.norm();
      const double f = value(psi);
      if (f > best) {
        best = f;
        best_psi = psi;
      }
    }
    sigma *= 0.1;
  }
  return best;
}

inline double sphere_search_norm(const SuperOperator& delta, int budget,
                                 std::uint64_t seed) {
  double best = 0.0;
  const int per_block =
      std::max(1, budget / delta.domain().block_count());
  for (int k = 0; k < delta.domain().block_count(); ++k)
    best = std::max(best, sphere_search_block(delta, k, per_block, seed));
  return best;
}

inline Matrix random_matrix(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// A random completely positive (not necessarily trace-preserving) map,
// scaled into the contraction regime.
inline SuperOperator random_positive_map(std::mt19937_64& rng,
                                         const AlgebraShape& shape,
                                         int n_kraus = 2) {
  std::vector<KrausOperator> ops(n_kraus);
  for (auto& K : ops)
    for (int k = 0; k < shape.block_count(); ++k)
      K.blocks.push_back(random_matrix(rng, shape.block(k).dim, 0.5));
  SuperOperator raw = make_kraus(shape, ops);
  const double nrm = norm_positive(raw);
  std::uniform_real_distribution<double> unif(0.3, 1.0);
  const double target = unif(rng);
  return raw.scale(nrm > 0 ? target / nrm : 1.0);
}

// A random trace-preserving Kraus channel (isometric completion).
inline SuperOperator random_tp_channel(std::mt19937_64& rng,
                                       const AlgebraShape& shape,
                                       int n_kraus = 2) {
  std::vector<KrausOperator> ops(n_kraus);
  for (int k = 0; k < shape.block_count(); ++k) {
    const int n = shape.block(k).dim;
    Matrix stacked(n_kraus * n, n);
    for (int i = 0; i < n_kraus; ++i)
      stacked.middleRows(i * n, n) = random_matrix(rng, n);
    // column-orthonormalize so that sum K_i* K_i = I
    Eigen::HouseholderQR<Matrix> qr(stacked);
    Matrix q = qr.householderQ() * Matrix::Identity(n_kraus * n, n);
    for (int i = 0; i < n_kraus; ++i)
      ops[i].blocks.push_back(q.middleRows(i * n, n));
  }
  return make_kraus(shape, ops, true);
}

}  // namespace zerotwo::oracles

#endif
