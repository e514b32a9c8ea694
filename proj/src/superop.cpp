#include "zerotwo/superop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace zerotwo {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  double nn = v.norm();
  if (nn == 0.0) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  return v / nn;
}

// Trace norm of the element with the given basis coordinates. Closed forms
// for one- and two-dimensional blocks keep the optimization loops cheap.
double trace_norm_from_coords(const AlgebraShape& shape, const RealVector& y) {
  double total = 0.0;
  for (int k = 0; k < shape.block_count(); ++k) {
    const int n = shape.block(k).dim;
    const int off = shape.herm_offset(k);
    const double w = shape.block(k).weight;
    if (n == 1) {
      total += std::sqrt(w) * std::abs(y[off]);
    } else if (n == 2) {
      const double y0 = y[off];
      const double r = std::sqrt(y[off + 1] * y[off + 1] +
                                 y[off + 2] * y[off + 2] +
                                 y[off + 3] * y[off + 3]);
      total += std::sqrt(2.0 * w) * std::max(std::abs(y0), r);
    } else {
      Matrix m = Matrix::Zero(n, n);
      for (int j = 0; j < n * n; ++j) m += y[off + j] * shape.basis_matrix(k, j);
      total += w * abs_eigenvalue_sum(m);
    }
  }
  return total;
}

// Coordinates of psi psi* / w_k (the positive extreme point in block k):
// c_j = psi* B_j psi, zero outside the block.
void extreme_coords_into(const AlgebraShape& shape, int k, const Vector& psi,
                         RealVector& c) {
  c.setZero();
  const int n = shape.block(k).dim;
  const int off = shape.herm_offset(k);
  for (int j = 0; j < n * n; ++j) {
    c[off + j] = (psi.adjoint() * shape.basis_matrix(k, j) * psi)(0, 0).real();
  }
}

int env_thread_count() {
  const char* s = std::getenv("ZEROTWO_THREADS");
  if (!s) return 1;
  int v = std::atoi(s);
  if (v < 1) return 1;
  return std::min(v, 64);
}

template <typename F>
void parallel_indices(int n, F&& f) {
  const int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += workers) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

int thread_count() {
  static const int n = env_thread_count();
  return n;
}

SuperOperator::SuperOperator(AlgebraShape domain, AlgebraShape codomain,
                             RealMatrix rep, PositivityCertificate cert)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      rep_(std::move(rep)),
      cert_(std::move(cert)) {
  require(rep_.rows() == codomain_.herm_dim() &&
              rep_.cols() == domain_.herm_dim(),
          ErrorCode::InvalidInput, "representation matrix size mismatch");
}

SuperOperator SuperOperator::identity(const AlgebraShape& shape) {
  return SuperOperator(shape, shape,
                       RealMatrix::Identity(shape.herm_dim(), shape.herm_dim()),
                       PositivityCertificate::by_construction("identity"));
}

SuperOperator SuperOperator::zero(const AlgebraShape& shape) {
  return SuperOperator(shape, shape,
                       RealMatrix::Zero(shape.herm_dim(), shape.herm_dim()),
                       PositivityCertificate::by_construction("zero"));
}

SuperOperator SuperOperator::from_action(
    const AlgebraShape& domain, const AlgebraShape& codomain,
    const std::function<HermitianElement(const HermitianElement&)>& action,
    PositivityCertificate cert) {
  RealMatrix rep(codomain.herm_dim(), domain.herm_dim());
  for (int k = 0; k < domain.block_count(); ++k) {
    const int n = domain.block(k).dim;
    const int off = domain.herm_offset(k);
    for (int j = 0; j < n * n; ++j) {
      RealVector c = RealVector::Zero(domain.herm_dim());
      c[off + j] = 1.0;
      HermitianElement b = HermitianElement::from_coords(domain, c);
      rep.col(off + j) = action(b).coords();
    }
  }
  return SuperOperator(domain, codomain, std::move(rep), std::move(cert));
}

SuperOperator SuperOperator::with_certificate(PositivityCertificate cert) const {
  return SuperOperator(domain_, codomain_, rep_, std::move(cert));
}

HermitianElement SuperOperator::apply(const HermitianElement& x) const {
  require(x.shape() == domain_, ErrorCode::InvalidInput,
          "element shape does not match the operator domain");
  return HermitianElement::from_coords(codomain_, rep_ * x.coords());
}

HermitianElement SuperOperator::dual_unit() const {
  RealVector c = HermitianElement::identity(codomain_).coords();
  return HermitianElement::from_coords(domain_, rep_.transpose() * c);
}

SuperOperator SuperOperator::compose(const SuperOperator& inner) const {
  require(inner.codomain_ == domain_, ErrorCode::InvalidInput,
          "composition shape mismatch");
  PositivityCertificate cert = PositivityCertificate::none();
  if (cert_.is_positive() && inner.cert_.is_positive())
    cert = PositivityCertificate::by_construction("compose");
  return SuperOperator(inner.domain_, codomain_, rep_ * inner.rep_, cert);
}

SuperOperator SuperOperator::operator+(const SuperOperator& o) const {
  require(domain_ == o.domain_ && codomain_ == o.codomain_,
          ErrorCode::InvalidInput, "sum shape mismatch");
  PositivityCertificate cert = PositivityCertificate::none();
  if (cert_.is_positive() && o.cert_.is_positive())
    cert = PositivityCertificate::by_construction("sum");
  return SuperOperator(domain_, codomain_, rep_ + o.rep_, cert);
}

SuperOperator SuperOperator::operator-(const SuperOperator& o) const {
  require(domain_ == o.domain_ && codomain_ == o.codomain_,
          ErrorCode::InvalidInput, "difference shape mismatch");
  return SuperOperator(domain_, codomain_, rep_ - o.rep_,
                       PositivityCertificate::none());
}

SuperOperator SuperOperator::scale(double s) const {
  PositivityCertificate cert = PositivityCertificate::none();
  if (s >= 0.0 && cert_.is_positive())
    cert = PositivityCertificate::by_construction("scaled");
  return SuperOperator(domain_, codomain_, s * rep_, cert);
}

SuperOperator SuperOperator::power(std::uint64_t n) const {
  require(domain_ == codomain_, ErrorCode::InvalidInput,
          "powers need an endomorphism");
  SuperOperator result = identity(domain_);
  SuperOperator base = *this;
  while (n > 0) {
    if (n & 1ULL) result = result.compose(base);
    n >>= 1ULL;
    if (n > 0) base = base.compose(base);
  }
  if (cert_.is_positive() && !result.cert_.is_positive())
    result.cert_ = PositivityCertificate::by_construction("power");
  return result;
}

SuperOperator SuperOperator::adjoint() const {
  // Transpose is exact for the tau-orthonormal basis pairing tau(x a).
  return SuperOperator(codomain_, domain_, rep_.transpose(), cert_);
}

bool SuperOperator::is_trace_preserving(double tol) const {
  for (int k = 0; k < domain_.block_count(); ++k) {
    const int n = domain_.block(k).dim;
    const int off = domain_.herm_offset(k);
    for (int j = 0; j < n * n; ++j) {
      RealVector c = RealVector::Zero(domain_.herm_dim());
      c[off + j] = 1.0;
      HermitianElement b = HermitianElement::from_coords(domain_, c);
      if (std::abs(trace(apply(b)) - trace(b)) > tol) return false;
    }
  }
  return true;
}

bool SuperOperator::is_unital_dual(double tol) const {
  if (domain_ != codomain_) return false;
  HermitianElement diff =
      dual_unit() - HermitianElement::identity(domain_);
  return diff.max_abs_entry() <= tol;
}

double commutation_defect(const SuperOperator& a, const SuperOperator& b) {
  require(a.domain() == a.codomain() && b.domain() == b.codomain() &&
              a.domain() == b.domain(),
          ErrorCode::InvalidInput, "commutator needs matching endomorphisms");
  return (a.rep() * b.rep() - b.rep() * a.rep()).cwiseAbs().maxCoeff();
}

double norm_positive(const SuperOperator& delta, bool assume_positive) {
  require(assume_positive || delta.certificate().is_positive(),
          ErrorCode::InvalidInput,
          "norm_positive needs a positivity certificate or an explicit "
          "caller assertion");
  return sup_norm(delta.dual_unit());
}

namespace {

struct BlockMax {
  double value = 0.0;
  Vector psi;
};

// Projected gradient ascent for sup over the unit sphere of block k of
// ||delta(psi psi* / w)||_1. The ascent direction comes from the active
// dual sign element of the output.
BlockMax ascend_block(const SuperOperator& delta, int k, const Vector& start,
                      const NormStrategy& strat) {
  const AlgebraShape& dom = delta.domain();
  const AlgebraShape& cod = delta.codomain();
  const int n = dom.block(k).dim;
  RealVector c(dom.herm_dim());
  auto objective = [&](const Vector& psi) {
    extreme_coords_into(dom, k, psi, c);
    return trace_norm_from_coords(cod, delta.rep() * c);
  };

  Vector psi = start;
  double f = objective(psi);
  for (int iter = 0; iter < strat.max_iterations; ++iter) {
    extreme_coords_into(dom, k, psi, c);
    HermitianElement out = HermitianElement::from_coords(cod, delta.rep() * c);
    // sign element of the output
    HermitianElement u = HermitianElement::zero(cod);
    {
      SpectralDecomposition sd = spectral(out);
      std::vector<Matrix> blocks;
      for (int b = 0; b < cod.block_count(); ++b) {
        const auto& lam = sd.eigenvalues(b);
        const auto& vecs = sd.eigenvectors(b);
        Matrix m = Matrix::Zero(cod.block(b).dim, cod.block(b).dim);
        for (int i = 0; i < lam.size(); ++i) {
          if (lam[i] > 0)
            m += vecs.col(i) * vecs.col(i).adjoint();
          else if (lam[i] < 0)
            m -= vecs.col(i) * vecs.col(i).adjoint();
        }
        blocks.push_back(std::move(m));
      }
      u = HermitianElement(cod, std::move(blocks));
    }
    HermitianElement a = HermitianElement::from_coords(
        dom, delta.rep().transpose() * u.coords());
    Matrix A = a.block(k);
    Vector Ap = A * psi;
    Vector g = Ap - (psi.dot(Ap)) * psi;
    const double gnorm = g.norm();
    if (gnorm <= strat.gradient_tol) break;
    double eta = 1.0 / std::max(1.0, A.cwiseAbs().maxCoeff() * n);
    bool accepted = false;
    for (int t = 0; t < 40; ++t) {
      Vector cand = psi + eta * g;
      cand /= cand.norm();
      double fc = objective(cand);
      if (fc >= f + 1e-4 * eta * gnorm * gnorm) {
        psi = cand;
        f = fc;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
  }
  return {f, psi};
}

BlockMax multistart_block(const SuperOperator& delta, int k,
                          const NormStrategy& strat) {
  const int n = delta.domain().block(k).dim;
  std::vector<Vector> starts;
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    starts.push_back(e);
  }
  for (int r = 0; r < strat.restarts; ++r) {
    std::mt19937_64 rng(mix(strat.seed, 1000003ULL * k + r));
    starts.push_back(random_unit(rng, n));
  }
  std::vector<BlockMax> results(starts.size());
  parallel_indices(static_cast<int>(starts.size()), [&](int i) {
    results[i] = ascend_block(delta, k, starts[i], strat);
  });
  BlockMax best = results[0];
  for (const auto& r : results)
    if (r.value > best.value) best = r;
  return best;
}

Vector bloch_vector_to_psi(double theta, double phi) {
  Vector psi(2);
  psi[0] = std::cos(0.5 * theta);
  psi[1] = std::polar(std::sin(0.5 * theta), phi);
  return psi;
}

// Exhaustive Bloch-sphere grid with local refinement for two-dimensional
// blocks. The objective is affine in the Bloch vector before the final
// trace norm, so the whole sweep runs in coordinate space.
BlockMax bloch_grid_block(const SuperOperator& delta, int k,
                          const NormStrategy& strat) {
  const AlgebraShape& dom = delta.domain();
  const AlgebraShape& cod = delta.codomain();
  const int off = dom.herm_offset(k);

  // psi psi* = (I + u . sigma)/2; coordinates are affine in u.
  RealVector base = RealVector::Zero(dom.herm_dim());
  RealMatrix dirs = RealMatrix::Zero(dom.herm_dim(), 3);
  {
    Matrix I2 = Matrix::Identity(2, 2);
    Matrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    sz << 1, 0, 0, -1;
    for (int j = 0; j < 4; ++j) {
      const Matrix& B = dom.basis_matrix(k, j);
      base[off + j] = 0.5 * (B * I2).trace().real();
      dirs(off + j, 0) = 0.5 * (B * sx).trace().real();
      dirs(off + j, 1) = 0.5 * (B * sy).trace().real();
      dirs(off + j, 2) = 0.5 * (B * sz).trace().real();
    }
  }
  const RealVector y0 = delta.rep() * base;
  const RealMatrix Y = delta.rep() * dirs;

  auto eval = [&](double theta, double phi) {
    const double st = std::sin(theta);
    Eigen::Vector3d u(st * std::cos(phi), st * std::sin(phi),
                      std::cos(theta));
    return trace_norm_from_coords(cod, y0 + Y * u);
  };

  double best = -1.0, best_theta = 0.0, best_phi = 0.0;
  const int np = std::max(2, strat.grid_polar);
  const int na = std::max(1, strat.grid_azimuth);
  for (int i = 0; i < np; ++i) {
    const double theta = M_PI * i / (np - 1);
    for (int j = 0; j < na; ++j) {
      const double phi = 2.0 * M_PI * j / na;
      const double f = eval(theta, phi);
      if (f > best) {
        best = f;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }
  double h = std::max(M_PI / (np - 1), 2.0 * M_PI / na);
  for (int round = 0; round < strat.refine_rounds; ++round) {
    const double t0 = best_theta, p0 = best_phi;
    for (int i = -6; i <= 6; ++i) {
      for (int j = -6; j <= 6; ++j) {
        const double theta =
            std::clamp(t0 + h * i / 6.0, 0.0, M_PI);
        const double phi = p0 + h * j / 6.0;
        const double f = eval(theta, phi);
        if (f > best) {
          best = f;
          best_theta = theta;
          best_phi = phi;
        }
      }
    }
    h *= 0.25;
  }
  return {best, bloch_vector_to_psi(best_theta, best_phi)};
}

double column_bound(const SuperOperator& delta) {
  const AlgebraShape& dom = delta.domain();
  const AlgebraShape& cod = delta.codomain();
  double bound = 0.0;
  for (int k = 0; k < dom.block_count(); ++k) {
    const int n = dom.block(k).dim;
    const int off = dom.herm_offset(k);
    const double w = dom.block(k).weight;
    for (int j = 0; j < n * n; ++j) {
      RealVector lam = hermitian_eigenvalues(dom.basis_matrix(k, j));
      const double bsup =
          std::max(std::abs(lam[0]), std::abs(lam[lam.size() - 1]));
      (void)w;
      bound += bsup * trace_norm_from_coords(cod, delta.rep().col(off + j));
    }
  }
  return bound;
}

}  // namespace

NormEstimate norm_1to1(const SuperOperator& delta,
                       const NormStrategy& strategy) {
  const AlgebraShape& dom = delta.domain();
  double lower = -1.0;
  int best_block = 0;
  Vector best_psi = Vector::Ones(1);
  bool exhaustive = true;  // all blocks covered by an exact sweep
  RealVector scratch(dom.herm_dim());
  for (int k = 0; k < dom.block_count(); ++k) {
    const int n = dom.block(k).dim;
    BlockMax bm;
    if (n == 1) {
      bm.psi = Vector::Ones(1);
      extreme_coords_into(dom, k, bm.psi, scratch);
      bm.value =
          trace_norm_from_coords(delta.codomain(), delta.rep() * scratch);
    } else if (n == 2 && strategy.bloch_grid) {
      bm = bloch_grid_block(delta, k, strategy);
      BlockMax pga = multistart_block(delta, k, strategy);
      if (pga.value > bm.value) bm = pga;
    } else {
      bm = multistart_block(delta, k, strategy);
      exhaustive = false;
    }
    if (bm.value > lower) {
      lower = bm.value;
      best_block = k;
      best_psi = bm.psi;
    }
  }
  lower = std::max(lower, 0.0);

  std::vector<double> uppers;
  if (exhaustive) uppers.push_back(lower);
  if (delta.certificate().is_positive())
    uppers.push_back(norm_positive(delta));
  if (strategy.positive_split) {
    const auto& [pa, pb] = *strategy.positive_split;
    uppers.push_back(norm_positive(pa, true) + norm_positive(pb, true));
  }
  uppers.push_back(column_bound(delta));
  double upper = uppers[0];
  for (double u : uppers) upper = std::min(upper, u);
  upper = std::max(upper, lower);

  return NormEstimate{lower, upper, upper - lower <= 1e-9,
                      extreme_point(dom, best_block, best_psi)};
}

namespace {

struct BlockMin {
  double value = 0.0;
  Vector psi;
};

BlockMin descend_block(const SuperOperator& delta, int k, const Vector& start,
                       int max_iterations) {
  const AlgebraShape& dom = delta.domain();
  const AlgebraShape& cod = delta.codomain();
  RealVector c(dom.herm_dim());
  auto min_eig = [&](const Vector& psi, int* block_out, Vector* vec_out) {
    extreme_coords_into(dom, k, psi, c);
    HermitianElement out = HermitianElement::from_coords(cod, delta.rep() * c);
    double best = std::numeric_limits<double>::infinity();
    int best_b = 0;
    for (int b = 0; b < cod.block_count(); ++b) {
      RealVector lam = hermitian_eigenvalues(out.block(b));
      if (lam[0] < best) {
        best = lam[0];
        best_b = b;
      }
    }
    if (block_out) *block_out = best_b;
    if (vec_out) {
      Eigen::SelfAdjointEigenSolver<Matrix> s(out.block(best_b));
      *vec_out = s.eigenvectors().col(0);
    }
    return best;
  };

  Vector psi = start;
  int jb = 0;
  Vector v;
  double f = min_eig(psi, &jb, &v);
  for (int iter = 0; iter < max_iterations; ++iter) {
    // gradient of the active eigenvalue branch
    HermitianElement u = HermitianElement::zero(cod);
    {
      std::vector<Matrix> blocks;
      for (int b = 0; b < cod.block_count(); ++b) {
        if (b == jb)
          blocks.push_back(v * v.adjoint());
        else
          blocks.push_back(
              Matrix::Zero(cod.block(b).dim, cod.block(b).dim));
      }
      u = HermitianElement(cod, std::move(blocks));
    }
    HermitianElement a = HermitianElement::from_coords(
        dom, delta.rep().transpose() * u.coords());
    Matrix A = a.block(k);
    Vector Ap = A * psi;
    Vector g = Ap - (psi.dot(Ap)) * psi;
    const double gnorm = g.norm();
    if (gnorm <= 1e-8) break;
    double eta = 1.0 / std::max(1.0, A.cwiseAbs().maxCoeff() *
                                         dom.block(k).dim);
    bool accepted = false;
    for (int t = 0; t < 40; ++t) {
      Vector cand = psi - eta * g;
      cand /= cand.norm();
      double fc = min_eig(cand, nullptr, nullptr);
      if (fc <= f - 1e-4 * eta * gnorm * gnorm) {
        psi = cand;
        f = min_eig(psi, &jb, &v);
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
  }
  return {f, psi};
}

}  // namespace

DominanceResult dominance_check(const SuperOperator& T, const SuperOperator& S,
                                int budget, std::uint64_t seed,
                                const SuperOperator* certified_residual) {
  require(T.domain() == S.domain() && T.codomain() == S.codomain(),
          ErrorCode::InvalidInput, "dominance needs matching shapes");
  if (certified_residual && certified_residual->certificate().is_positive()) {
    const double defect = (certified_residual->rep() - (S.rep() - T.rep()))
                              .cwiseAbs()
                              .maxCoeff();
    require(defect <= 1e-12, ErrorCode::InvalidInput,
            "certified residual does not equal S - T");
    return DominanceResult{true, true, std::nullopt};
  }
  SuperOperator delta = S - T;
  const AlgebraShape& dom = delta.domain();
  double worst = std::numeric_limits<double>::infinity();
  DominanceWitness witness;
  for (int k = 0; k < dom.block_count(); ++k) {
    const int n = dom.block(k).dim;
    std::vector<Vector> starts;
    for (int i = 0; i < n; ++i) {
      Vector e = Vector::Zero(n);
      e[i] = 1.0;
      starts.push_back(e);
    }
    for (int r = 0; r < budget; ++r) {
      std::mt19937_64 rng(mix(seed ^ 0xd0d0d0d0ULL, 1000003ULL * k + r));
      starts.push_back(random_unit(rng, n));
    }
    std::vector<BlockMin> results(starts.size());
    parallel_indices(static_cast<int>(starts.size()), [&](int i) {
      results[i] = descend_block(delta, k, starts[i], 200);
    });
    for (const auto& r : results) {
      if (r.value < worst) {
        worst = r.value;
        witness = DominanceWitness{k, r.psi, r.value};
      }
    }
  }
  if (worst < -1e-9) return DominanceResult{false, false, witness};
  return DominanceResult{true, false, std::nullopt};
}

// --- channel constructors ---------------------------------------------

SuperOperator make_kraus(const AlgebraShape& shape,
                         const std::vector<KrausOperator>& kraus,
                         bool require_tp) {
  require(!kraus.empty(), ErrorCode::InvalidInput,
          "need at least one Kraus operator");
  for (const auto& K : kraus) {
    require(static_cast<int>(K.blocks.size()) == shape.block_count(),
            ErrorCode::InvalidInput, "Kraus operator block count mismatch");
    for (int k = 0; k < shape.block_count(); ++k) {
      require(K.blocks[k].rows() == shape.block(k).dim &&
                  K.blocks[k].cols() == shape.block(k).dim,
              ErrorCode::InvalidInput, "Kraus operator block size mismatch");
    }
  }
  if (require_tp) {
    for (int k = 0; k < shape.block_count(); ++k) {
      const int n = shape.block(k).dim;
      Matrix sum = Matrix::Zero(n, n);
      for (const auto& K : kraus) sum += K.blocks[k].adjoint() * K.blocks[k];
      require((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10,
              ErrorCode::TracePreservationViolated,
              "Kraus operators do not sum to the identity");
    }
  }
  auto action = [shape, kraus](const HermitianElement& x) {
    std::vector<Matrix> out;
    for (int k = 0; k < shape.block_count(); ++k) {
      const int n = shape.block(k).dim;
      Matrix y = Matrix::Zero(n, n);
      for (const auto& K : kraus)
        y += K.blocks[k] * x.block(k) * K.blocks[k].adjoint();
      out.push_back(std::move(y));
    }
    return HermitianElement(shape, std::move(out));
  };
  return SuperOperator::from_action(
      shape, shape, action, PositivityCertificate::by_construction("kraus"));
}

SuperOperator make_depolarizing(const AlgebraShape& shape, double p) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidInput,
          "depolarizing parameter must lie in [0, 1]");
  const double tid = shape.trace_of_identity();
  auto action = [shape, p, tid](const HermitianElement& x) {
    HermitianElement y = x * (1.0 - p);
    return y + HermitianElement::identity(shape) * (p * trace(x) / tid);
  };
  return SuperOperator::from_action(
      shape, shape, action,
      PositivityCertificate::by_construction("depolarizing"));
}

SuperOperator make_permutation(const AlgebraShape& shape,
                               const std::vector<std::vector<int>>& sigma) {
  require(static_cast<int>(sigma.size()) == shape.block_count(),
          ErrorCode::InvalidInput, "one permutation per block required");
  std::vector<KrausOperator> kraus(1);
  for (int k = 0; k < shape.block_count(); ++k) {
    const int n = shape.block(k).dim;
    require(static_cast<int>(sigma[k].size()) == n, ErrorCode::InvalidInput,
            "permutation length mismatch");
    std::vector<bool> seen(n, false);
    Matrix P = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      const int i = sigma[k][j];
      require(i >= 0 && i < n && !seen[i], ErrorCode::InvalidInput,
              "not a permutation");
      seen[i] = true;
      P(i, j) = 1.0;
    }
    kraus[0].blocks.push_back(std::move(P));
  }
  SuperOperator op = make_kraus(shape, kraus, true);
  return op.with_certificate(
      PositivityCertificate::by_construction("permutation"));
}

SuperOperator make_stochastic(const AlgebraShape& shape, const RealMatrix& A) {
  require(shape.is_diagonal(), ErrorCode::InvalidInput,
          "stochastic embedding needs a diagonal algebra");
  const int n = shape.block_count();
  require(A.rows() == n && A.cols() == n, ErrorCode::InvalidInput,
          "stochastic matrix size mismatch");
  for (int j = 0; j < n; ++j) {
    double col = 0.0;
    for (int i = 0; i < n; ++i) {
      require(A(i, j) >= 0.0, ErrorCode::InvalidInput,
              "stochastic entries must be nonnegative");
      col += shape.block(i).weight * A(i, j);
    }
    require(std::abs(col - shape.block(j).weight) <=
                1e-10 * std::max(1.0, shape.block(j).weight),
            ErrorCode::InvalidInput,
            "columns must sum to one with respect to the weights");
  }
  auto action = [shape, A, n](const HermitianElement& x) {
    std::vector<Matrix> out(n);
    for (int i = 0; i < n; ++i) {
      Complex v = 0.0;
      for (int j = 0; j < n; ++j) v += A(i, j) * x.block(j)(0, 0);
      Matrix m(1, 1);
      m(0, 0) = v;
      out[i] = std::move(m);
    }
    return HermitianElement(shape, std::move(out));
  };
  return SuperOperator::from_action(
      shape, shape, action,
      PositivityCertificate::by_construction("stochastic"));
}

SuperOperator make_schur(const AlgebraShape& shape,
                         const std::vector<Matrix>& C) {
  require(static_cast<int>(C.size()) == shape.block_count(),
          ErrorCode::InvalidInput, "one Schur multiplier per block required");
  std::vector<Matrix> mult;
  for (int k = 0; k < shape.block_count(); ++k) {
    const int n = shape.block(k).dim;
    require(C[k].rows() == n && C[k].cols() == n, ErrorCode::InvalidInput,
            "Schur multiplier size mismatch");
    Matrix H = 0.5 * (C[k] + C[k].adjoint().eval());
    require((H - C[k]).cwiseAbs().maxCoeff() <= 1e-12,
            ErrorCode::InvalidInput, "Schur multiplier must be Hermitian");
    for (int i = 0; i < n; ++i)
      require(std::abs(H(i, i) - 1.0) <= 1e-10, ErrorCode::InvalidInput,
              "Schur multiplier needs a unit diagonal");
    RealVector lam = hermitian_eigenvalues(H);
    require(lam[0] >= -1e-10 * std::max(1.0, lam[lam.size() - 1]),
            ErrorCode::InvalidInput,
            "Schur multiplier must be positive semidefinite");
    mult.push_back(std::move(H));
  }
  auto action = [shape, mult](const HermitianElement& x) {
    std::vector<Matrix> out;
    for (int k = 0; k < shape.block_count(); ++k)
      out.push_back(mult[k].cwiseProduct(x.block(k)));
    return HermitianElement(shape, std::move(out));
  };
  return SuperOperator::from_action(
      shape, shape, action, PositivityCertificate::by_construction("schur"));
}

SuperOperator make_convex(
    const std::vector<std::pair<double, SuperOperator>>& terms) {
  require(!terms.empty(), ErrorCode::InvalidInput,
          "convex combination needs at least one term");
  double total = 0.0;
  bool positive = true;
  for (const auto& [lam, op] : terms) {
    require(lam >= 0.0, ErrorCode::InvalidInput,
            "convex weights must be nonnegative");
    require(op.domain() == terms[0].second.domain() &&
                op.codomain() == terms[0].second.codomain(),
            ErrorCode::InvalidInput, "convex terms must share shapes");
    total += lam;
    positive = positive && op.certificate().is_positive();
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorCode::InvalidInput,
          "convex weights must sum to one");
  RealMatrix rep = RealMatrix::Zero(terms[0].second.rep().rows(),
                                    terms[0].second.rep().cols());
  for (const auto& [lam, op] : terms) rep += lam * op.rep();
  return SuperOperator(terms[0].second.domain(), terms[0].second.codomain(),
                       std::move(rep),
                       positive
                           ? PositivityCertificate::by_construction("convex")
                           : PositivityCertificate::none());
}

SuperOperator make_ggm_diagonal(const AlgebraShape& shape,
                                const RealVector& factors,
                                PositivityCertificate cert) {
  require(factors.size() == shape.herm_dim(), ErrorCode::InvalidInput,
          "need one factor per basis element");
  RealMatrix rep = factors.asDiagonal();
  return SuperOperator(shape, shape, std::move(rep), std::move(cert));
}

}  // namespace zerotwo
