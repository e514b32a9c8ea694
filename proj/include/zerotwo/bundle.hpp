#ifndef ZEROTWO_BUNDLE_HPP
#define ZEROTWO_BUNDLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "zerotwo/laws.hpp"
#include "zerotwo/superop.hpp"

namespace zerotwo {

// A finite atomic measure space: labelled atoms with strictly positive
// masses. Sigma is the full powerset and never materializes.
struct FiniteMeasureSpace {
  std::vector<std::string> atoms;
  std::vector<double> masses;
};

void validate(const FiniteMeasureSpace& base);

// Fiberwise algebras over a finite base. The flattened shape concatenates
// every fiber's blocks, which realizes the total Hermitian space as one
// direct sum; the center projections become index ranges.
class BundleAlgebra {
 public:
  BundleAlgebra(FiniteMeasureSpace base, std::vector<AlgebraShape> fibers);

  int atom_count() const { return static_cast<int>(fibers_.size()); }
  const FiniteMeasureSpace& base() const { return base_; }
  const AlgebraShape& fiber(int i) const { return fibers_[i]; }
  const AlgebraShape& flattened() const { return *flattened_; }
  // herm-coordinate range of atom i inside the flattened shape
  int fiber_herm_offset(int i) const { return herm_offsets_[i]; }

  bool operator==(const BundleAlgebra& o) const;

 private:
  FiniteMeasureSpace base_;
  std::vector<AlgebraShape> fibers_;
  std::shared_ptr<AlgebraShape> flattened_;
  std::vector<int> herm_offsets_;
};

class Section {
 public:
  Section(BundleAlgebra bundle, std::vector<HermitianElement> fibers);
  static Section zero(const BundleAlgebra& bundle);
  static Section unit(const BundleAlgebra& bundle);

  const BundleAlgebra& bundle() const { return bundle_; }
  const HermitianElement& at(int i) const { return fibers_[i]; }
  int atom_count() const { return static_cast<int>(fibers_.size()); }

 private:
  BundleAlgebra bundle_;
  std::vector<HermitianElement> fibers_;
};

// An element of L0(Omega): one real value per atom.
struct CenterValue {
  std::vector<double> values;
  double max() const;
  double min() const;
};

class SectionOperator {
 public:
  SectionOperator(BundleAlgebra bundle, std::vector<SuperOperator> fibers);
  const BundleAlgebra& bundle() const { return bundle_; }
  const SuperOperator& at(int i) const { return fibers_[i]; }
  int atom_count() const { return static_cast<int>(fibers_.size()); }

 private:
  BundleAlgebra bundle_;
  std::vector<SuperOperator> fibers_;
};

// Fiberwise application (Tx)(omega) = T_omega(x(omega)).
Section apply(const SectionOperator& T, const Section& x);

// Phi(x)(omega) = tau_omega(x(omega))
CenterValue center_trace(const Section& x);
// ||x||_{1,Phi}(omega) = trace norm of the fiber
CenterValue vector_norm(const Section& x);
// The normalized functional Phi(x) (1 + Phi(1))^{-1} used by the lifting
// construction; on a finite atomic base it is a positive rescaling.
CenterValue phi0(const Section& x);

// Identity selection of the everywhere-defined representative; linear,
// multiplicative and *-preserving by construction on an atomic base.
Section lift(const Section& x);

// Splits a center-commuting map on the flattened algebra into fiber maps.
// Cross-atom coupling above tol raises CenterCommutationViolated.
SectionOperator disintegrate(const BundleAlgebra& bundle,
                             const SuperOperator& global, double tol = 1e-10);
// Block-diagonal embedding; exact inverse of disintegrate.
SuperOperator assemble(const SectionOperator& fibers);

struct FiberNorms {
  CenterValue lower;
  CenterValue upper;
  std::vector<bool> exact;
};

// Componentwise induced norm of the fiber maps (the Banach-Kantorovich
// operator norm over the center).
FiberNorms operator_center_norm(const SectionOperator& T,
                                const NormStrategy& = {});

struct OrderLimitReport {
  std::uint64_t m = 1;
  std::uint64_t k = 1;
  double eps = 1e-3;
  std::uint64_t n_max = 32;
  bool global_unit_fixed = false;            // T(1) = 1 on the total space
  std::vector<bool> fiber_dual_unital;       // T_w*(1_w) = 1_w per fiber
  std::vector<double> hyp_norm_mk;           // ||T_w^{m+k} - S_w||
  std::vector<double> hyp_norm_m;            // ||T_w^m - S_w||
  // norms[i][n-1] = ||T_w^{n+k} - T_w^n|| at atom i
  std::vector<std::vector<NormEstimate>> norms;
  std::vector<std::optional<std::uint64_t>> fiber_n_zero;
  bool converges = false;  // order limit = componentwise limit on finite bases
};

// Vector-valued dichotomy: per-fiber hypotheses with a supplied dominated
// family S(omega), then componentwise decay of the center-valued operator
// norm. PremiseViolated names the offending atom.
OrderLimitReport order_limit_check(const SectionOperator& T,
                                   const SectionOperator& S, std::uint64_t m,
                                   std::uint64_t k, double eps,
                                   std::uint64_t n_max,
                                   int dominance_budget = 16,
                                   std::uint64_t seed = 1,
                                   const NormStrategy& = {});

// The GNS fiber data built from a trace functional phi (one weight per
// block): Gram form of s(x, y) = phi(y* x) on the Hermitian basis taken as
// a complex basis, its kernel, the quotient with induced inner product,
// left multiplication on the quotient and the natural trace.
struct GnsFiber {
  AlgebraShape shape = AlgebraShape::single(1);
  RealVector phi;
  int source_dim = 0;
  int kernel_dim = 0;
  int quotient_dim = 0;
  RealMatrix kernel_basis;    // source_dim x kernel_dim coordinate columns
  RealMatrix isometry;        // quotient_dim x source_dim
  RealMatrix pseudo_inverse;  // source_dim x quotient_dim
  Vector unit;                // class of the algebra unit

  // Left multiplication by y (given blockwise) on the quotient.
  Matrix represent(const std::vector<Matrix>& blocks) const;
  // mu(A) = <A [1], [1]> for a represented operator A
  Complex natural_trace(const Matrix& represented) const;
  Complex mu_of(const std::vector<Matrix>& blocks) const;
};

GnsFiber gns(const AlgebraShape& shape, const RealVector& phi);

}  // namespace zerotwo

#endif
