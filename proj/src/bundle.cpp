#include "zerotwo/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace zerotwo {

void validate(const FiniteMeasureSpace& base) {
  require(!base.atoms.empty(), ErrorCode::InvalidInput,
          "the base needs at least one atom");
  require(base.atoms.size() == base.masses.size(), ErrorCode::InvalidInput,
          "one mass per atom required");
  for (double m : base.masses)
    require(m > 0.0, ErrorCode::InvalidInput,
            "atom masses must be strictly positive");
  std::set<std::string> labels(base.atoms.begin(), base.atoms.end());
  require(labels.size() == base.atoms.size(), ErrorCode::InvalidInput,
          "atom labels must be distinct");
}

BundleAlgebra::BundleAlgebra(FiniteMeasureSpace base,
                             std::vector<AlgebraShape> fibers)
    : base_(std::move(base)), fibers_(std::move(fibers)) {
  validate(base_);
  require(base_.atoms.size() == fibers_.size(), ErrorCode::InvalidInput,
          "one fiber algebra per atom required");
  std::vector<BlockSpec> all;
  herm_offsets_.reserve(fibers_.size());
  int off = 0;
  for (const auto& f : fibers_) {
    herm_offsets_.push_back(off);
    off += f.herm_dim();
    for (const auto& b : f.blocks()) all.push_back(b);
  }
  flattened_ = std::make_shared<AlgebraShape>(std::move(all));
}

bool BundleAlgebra::operator==(const BundleAlgebra& o) const {
  return base_.atoms == o.base_.atoms && base_.masses == o.base_.masses &&
         fibers_ == o.fibers_;
}

Section::Section(BundleAlgebra bundle, std::vector<HermitianElement> fibers)
    : bundle_(std::move(bundle)), fibers_(std::move(fibers)) {
  require(static_cast<int>(fibers_.size()) == bundle_.atom_count(),
          ErrorCode::InvalidInput, "one fiber element per atom required");
  for (int i = 0; i < bundle_.atom_count(); ++i)
    require(fibers_[i].shape() == bundle_.fiber(i), ErrorCode::InvalidInput,
            "fiber shapes must match the bundle");
}

Section Section::zero(const BundleAlgebra& bundle) {
  std::vector<HermitianElement> fibers;
  for (int i = 0; i < bundle.atom_count(); ++i)
    fibers.push_back(HermitianElement::zero(bundle.fiber(i)));
  return Section(bundle, std::move(fibers));
}

Section Section::unit(const BundleAlgebra& bundle) {
  std::vector<HermitianElement> fibers;
  for (int i = 0; i < bundle.atom_count(); ++i)
    fibers.push_back(HermitianElement::identity(bundle.fiber(i)));
  return Section(bundle, std::move(fibers));
}

double CenterValue::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  return m;
}

double CenterValue::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values) m = std::min(m, v);
  return m;
}

SectionOperator::SectionOperator(BundleAlgebra bundle,
                                 std::vector<SuperOperator> fibers)
    : bundle_(std::move(bundle)), fibers_(std::move(fibers)) {
  require(static_cast<int>(fibers_.size()) == bundle_.atom_count(),
          ErrorCode::InvalidInput, "one fiber map per atom required");
  for (int i = 0; i < bundle_.atom_count(); ++i) {
    require(fibers_[i].domain() == bundle_.fiber(i) &&
                fibers_[i].codomain() == bundle_.fiber(i),
            ErrorCode::InvalidInput, "fiber map shapes must match the bundle");
  }
}

Section apply(const SectionOperator& T, const Section& x) {
  require(T.bundle() == x.bundle(), ErrorCode::InvalidInput,
          "section and operator bundles differ");
  std::vector<HermitianElement> fibers;
  for (int i = 0; i < x.atom_count(); ++i)
    fibers.push_back(T.at(i).apply(x.at(i)));
  return Section(x.bundle(), std::move(fibers));
}

CenterValue center_trace(const Section& x) {
  CenterValue out;
  for (int i = 0; i < x.atom_count(); ++i)
    out.values.push_back(trace(x.at(i)));
  return out;
}

CenterValue vector_norm(const Section& x) {
  CenterValue out;
  for (int i = 0; i < x.atom_count(); ++i)
    out.values.push_back(trace_norm(x.at(i)));
  return out;
}

CenterValue phi0(const Section& x) {
  CenterValue out = center_trace(x);
  for (int i = 0; i < x.atom_count(); ++i)
    out.values[i] /= 1.0 + x.bundle().fiber(i).trace_of_identity();
  return out;
}

Section lift(const Section& x) { return x; }

SectionOperator disintegrate(const BundleAlgebra& bundle,
                             const SuperOperator& global, double tol) {
  require(global.domain() == bundle.flattened() &&
              global.codomain() == bundle.flattened(),
          ErrorCode::InvalidInput,
          "the global map must act on the flattened bundle algebra");
  const RealMatrix& rep = global.rep();
  for (int i = 0; i < bundle.atom_count(); ++i) {
    for (int j = 0; j < bundle.atom_count(); ++j) {
      if (i == j) continue;
      const double coupling =
          rep.block(bundle.fiber_herm_offset(i), bundle.fiber_herm_offset(j),
                    bundle.fiber(i).herm_dim(), bundle.fiber(j).herm_dim())
              .cwiseAbs()
              .maxCoeff();
      if (coupling > tol) {
        std::ostringstream os;
        os << "cross-atom coupling " << coupling << " between "
           << bundle.base().atoms[i] << " and " << bundle.base().atoms[j];
        fail(ErrorCode::CenterCommutationViolated, os.str());
      }
    }
  }
  std::vector<SuperOperator> fibers;
  for (int i = 0; i < bundle.atom_count(); ++i) {
    RealMatrix sub =
        rep.block(bundle.fiber_herm_offset(i), bundle.fiber_herm_offset(i),
                  bundle.fiber(i).herm_dim(), bundle.fiber(i).herm_dim());
    PositivityCertificate cert =
        global.certificate().is_positive()
            ? PositivityCertificate::by_construction("disintegrated")
            : PositivityCertificate::none();
    fibers.emplace_back(bundle.fiber(i), bundle.fiber(i), std::move(sub),
                        std::move(cert));
  }
  return SectionOperator(bundle, std::move(fibers));
}

SuperOperator assemble(const SectionOperator& fibers) {
  const BundleAlgebra& bundle = fibers.bundle();
  const int d = bundle.flattened().herm_dim();
  RealMatrix rep = RealMatrix::Zero(d, d);
  bool positive = true;
  for (int i = 0; i < bundle.atom_count(); ++i) {
    rep.block(bundle.fiber_herm_offset(i), bundle.fiber_herm_offset(i),
              bundle.fiber(i).herm_dim(), bundle.fiber(i).herm_dim()) =
        fibers.at(i).rep();
    positive = positive && fibers.at(i).certificate().is_positive();
  }
  return SuperOperator(bundle.flattened(), bundle.flattened(), std::move(rep),
                       positive ? PositivityCertificate::by_construction(
                                      "assembled")
                                : PositivityCertificate::none());
}

FiberNorms operator_center_norm(const SectionOperator& T,
                                const NormStrategy& strategy) {
  FiberNorms out;
  for (int i = 0; i < T.atom_count(); ++i) {
    NormEstimate est = norm_1to1(T.at(i), strategy);
    out.lower.values.push_back(est.lower);
    out.upper.values.push_back(est.upper);
    out.exact.push_back(est.exact);
  }
  return out;
}

OrderLimitReport order_limit_check(const SectionOperator& T,
                                   const SectionOperator& S, std::uint64_t m,
                                   std::uint64_t k, double eps,
                                   std::uint64_t n_max, int dominance_budget,
                                   std::uint64_t seed,
                                   const NormStrategy& strategy) {
  require(T.bundle() == S.bundle(), ErrorCode::InvalidInput,
          "T and S must live over the same bundle");
  const BundleAlgebra& bundle = T.bundle();
  OrderLimitReport report;
  report.m = m;
  report.k = k;
  report.eps = eps;
  report.n_max = n_max;

  // both readings of unitality are checked and reported; the dichotomy
  // premises use the fiberwise dual condition
  {
    SuperOperator global = assemble(T);
    HermitianElement gid = HermitianElement::identity(bundle.flattened());
    report.global_unit_fixed =
        (global.apply(gid) - gid).max_abs_entry() <= 1e-9;
  }

  for (int i = 0; i < bundle.atom_count(); ++i) {
    const std::string& atom = bundle.base().atoms[i];
    const SuperOperator& Tw = T.at(i);
    const SuperOperator& Sw = S.at(i);
    report.fiber_dual_unital.push_back(Tw.is_unital_dual(1e-9));
    if (!Tw.certificate().is_positive())
      fail(ErrorCode::PremiseViolated,
           "fiber " + atom + " carries no positivity certificate");
    if (norm_positive(Tw) > 1.0 + 1e-9)
      fail(ErrorCode::PremiseViolated,
           "fiber " + atom + " is not a contraction");
    if (!report.fiber_dual_unital.back())
      fail(ErrorCode::PremiseViolated,
           "fiber " + atom + " is not unital (dual unit differs from 1)");
    if (!Sw.certificate().is_positive() || norm_positive(Sw) > 1.0 + 1e-9)
      fail(ErrorCode::PremiseViolated,
           "dominated fiber map at " + atom + " is not a positive contraction");

    SuperOperator Tmk = Tw.power(m + k);
    SuperOperator Tm = Tw.power(m);
    if (!dominance_check(Sw, Tmk, dominance_budget, seed).dominated)
      fail(ErrorCode::PremiseViolated,
           "T^{m+k} >= S fails at atom " + atom);
    if (!dominance_check(Sw, Tm, dominance_budget, seed).dominated)
      fail(ErrorCode::PremiseViolated, "T^m >= S fails at atom " + atom);
    const double nmk = norm_positive(Tmk - Sw, true);
    const double nm = norm_positive(Tm - Sw, true);
    report.hyp_norm_mk.push_back(nmk);
    report.hyp_norm_m.push_back(nm);
    if (nmk >= 1.0 - 1e-9 || nm >= 1.0 - 1e-9)
      fail(ErrorCode::PremiseViolated,
           "hypothesis norms are not below one at atom " + atom);
  }

  report.converges = true;
  for (int i = 0; i < bundle.atom_count(); ++i) {
    const SuperOperator& Tw = T.at(i);
    std::vector<NormEstimate> row;
    SuperOperator Tn = Tw;  // T^n
    SuperOperator Tk = Tw.power(k);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      SuperOperator A = Tk.compose(Tn);
      NormStrategy strat = strategy;
      strat.positive_split = std::make_pair(A, Tn);
      row.push_back(norm_1to1(A - Tn, strat));
      if (n < n_max) Tn = Tw.compose(Tn);
    }
    // first n whose tail stays below eps
    std::optional<std::uint64_t> n_zero;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      bool ok = true;
      for (std::uint64_t j = n; j <= n_max; ++j)
        ok = ok && row[j - 1].upper < eps;
      if (ok) {
        n_zero = n;
        break;
      }
    }
    report.converges = report.converges && n_zero.has_value();
    report.fiber_n_zero.push_back(n_zero);
    report.norms.push_back(std::move(row));
  }
  return report;
}

Matrix GnsFiber::represent(const std::vector<Matrix>& blocks) const {
  require(static_cast<int>(blocks.size()) == shape.block_count(),
          ErrorCode::InvalidInput, "block count mismatch");
  // left-multiplication matrix in the Hermitian basis taken complex:
  // y B_j = sum_i tau(B_i y B_j) B_i
  Matrix L(source_dim, source_dim);
  int col = 0;
  for (int kb = 0; kb < shape.block_count(); ++kb) {
    const int n = shape.block(kb).dim;
    for (int j = 0; j < n * n; ++j, ++col) {
      Matrix yb = blocks[kb] * shape.basis_matrix(kb, j);
      int row = 0;
      for (int ib = 0; ib < shape.block_count(); ++ib) {
        const int nn = ib == kb ? n : shape.block(ib).dim;
        for (int i = 0; i < nn * nn; ++i, ++row) {
          L(row, col) =
              ib == kb
                  ? shape.block(ib).weight *
                        (shape.basis_matrix(ib, i) * yb).trace()
                  : Complex(0.0, 0.0);
        }
      }
    }
  }
  return isometry.cast<Complex>() * L * pseudo_inverse.cast<Complex>();
}

Complex GnsFiber::natural_trace(const Matrix& represented) const {
  return (unit.adjoint() * represented * unit)(0, 0);
}

Complex GnsFiber::mu_of(const std::vector<Matrix>& blocks) const {
  return natural_trace(represent(blocks));
}

GnsFiber gns(const AlgebraShape& shape, const RealVector& phi) {
  require(phi.size() == shape.block_count(), ErrorCode::InvalidInput,
          "one trace weight per block required");
  GnsFiber fiber;
  fiber.shape = shape;
  fiber.phi = phi;
  fiber.source_dim = shape.herm_dim();

  // Gram matrix of s(x, y) = phi(y* x) on the basis; real symmetric since
  // tau(B_i B_j) is real for Hermitian basis elements.
  RealMatrix gram(fiber.source_dim, fiber.source_dim);
  int row = 0;
  for (int kb = 0; kb < shape.block_count(); ++kb) {
    const int n = shape.block(kb).dim;
    for (int i = 0; i < n * n; ++i, ++row) {
      int col = 0;
      for (int jb = 0; jb < shape.block_count(); ++jb) {
        const int nn = shape.block(jb).dim;
        for (int j = 0; j < nn * nn; ++j, ++col) {
          gram(row, col) =
              (kb == jb)
                  ? phi[kb] * (shape.basis_matrix(kb, i) *
                               shape.basis_matrix(kb, j))
                                  .trace()
                                  .real()
                  : 0.0;
        }
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(gram);
  require(solver.info() == Eigen::Success, ErrorCode::NumericalFailure,
          "Gram eigendecomposition failed");
  const RealVector lam = solver.eigenvalues();
  require(lam[0] >= -1e-9, ErrorCode::InvalidTrace,
          "the Gram form of the trace is indefinite");
  const double cutoff = 1e-10 * std::max(lam[lam.size() - 1], 0.0);

  std::vector<int> kernel, range;
  for (int i = 0; i < lam.size(); ++i) {
    if (lam[i] <= cutoff)
      kernel.push_back(i);
    else
      range.push_back(i);
  }
  fiber.kernel_dim = static_cast<int>(kernel.size());
  fiber.quotient_dim = static_cast<int>(range.size());
  fiber.kernel_basis = RealMatrix(fiber.source_dim, fiber.kernel_dim);
  for (int i = 0; i < fiber.kernel_dim; ++i)
    fiber.kernel_basis.col(i) = solver.eigenvectors().col(kernel[i]);
  fiber.isometry = RealMatrix(fiber.quotient_dim, fiber.source_dim);
  fiber.pseudo_inverse = RealMatrix(fiber.source_dim, fiber.quotient_dim);
  for (int i = 0; i < fiber.quotient_dim; ++i) {
    const double s = std::sqrt(lam[range[i]]);
    fiber.isometry.row(i) = s * solver.eigenvectors().col(range[i]).transpose();
    fiber.pseudo_inverse.col(i) = solver.eigenvectors().col(range[i]) / s;
  }

  fiber.unit = fiber.isometry.cast<Complex>() *
               HermitianElement::identity(shape).coords().cast<Complex>();
  return fiber;
}

}  // namespace zerotwo
