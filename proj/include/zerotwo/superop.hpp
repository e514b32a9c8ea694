#ifndef ZEROTWO_SUPEROP_HPP
#define ZEROTWO_SUPEROP_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zerotwo/algebra.hpp"

namespace zerotwo {

// Positivity of a general map is not decidable cheaply, so maps carry a
// certificate: ByConstruction for the channel constructors whose positivity
// is structural, Checked for maps that survived budgeted falsification,
// None otherwise. Norm shortcuts that require positivity demand a
// certificate or an explicit caller assertion.
enum class PositivityKind { None, ByConstruction, Checked };

struct PositivityCertificate {
  PositivityKind kind = PositivityKind::None;
  std::string origin;
  int budget = 0;

  static PositivityCertificate none() { return {}; }
  static PositivityCertificate by_construction(std::string origin) {
    return {PositivityKind::ByConstruction, std::move(origin), 0};
  }
  static PositivityCertificate checked(int budget) {
    return {PositivityKind::Checked, "checked", budget};
  }
  bool is_positive() const { return kind != PositivityKind::None; }
};

// A real-linear map on the Hermitian part, stored as its matrix in the
// tau-orthonormal Hermitian basis of each shape. The real representation
// guarantees Hermitian in, Hermitian out.
class SuperOperator {
 public:
  SuperOperator(AlgebraShape domain, AlgebraShape codomain, RealMatrix rep,
                PositivityCertificate cert = PositivityCertificate::none());

  static SuperOperator identity(const AlgebraShape& shape);
  static SuperOperator zero(const AlgebraShape& shape);
  // Builds the representation by applying `action` to every basis element.
  static SuperOperator from_action(
      const AlgebraShape& domain, const AlgebraShape& codomain,
      const std::function<HermitianElement(const HermitianElement&)>& action,
      PositivityCertificate cert = PositivityCertificate::none());

  const AlgebraShape& domain() const { return domain_; }
  const AlgebraShape& codomain() const { return codomain_; }
  const RealMatrix& rep() const { return rep_; }
  const PositivityCertificate& certificate() const { return cert_; }
  SuperOperator with_certificate(PositivityCertificate cert) const;

  HermitianElement apply(const HermitianElement& x) const;
  // T*(1); the dual unit that drives every positive-map norm.
  HermitianElement dual_unit() const;

  SuperOperator compose(const SuperOperator& inner) const;  // this after inner
  SuperOperator operator*(const SuperOperator& inner) const {
    return compose(inner);
  }
  SuperOperator operator+(const SuperOperator& o) const;
  SuperOperator operator-(const SuperOperator& o) const;
  SuperOperator scale(double s) const;
  SuperOperator power(std::uint64_t n) const;
  SuperOperator adjoint() const;

  bool is_trace_preserving(double tol = 1e-9) const;
  bool is_unital_dual(double tol = 1e-9) const;

 private:
  AlgebraShape domain_;
  AlgebraShape codomain_;
  RealMatrix rep_;
  PositivityCertificate cert_;
};

// max |(AB - BA)_ij| of the representation matrices.
double commutation_defect(const SuperOperator& a, const SuperOperator& b);

struct NormEstimate {
  double lower = 0.0;           // achieved by `witness`
  double upper = 0.0;           // certified bound
  bool exact = false;           // upper - lower <= 1e-9
  HermitianElement witness;     // extreme point realizing `lower`
};

struct NormStrategy {
  std::uint64_t seed = 1;
  int restarts = 64;
  int max_iterations = 500;
  double gradient_tol = 1e-8;
  bool bloch_grid = true;       // exhaustive grid on 2-dim blocks
  int grid_azimuth = 400;
  int grid_polar = 200;
  int refine_rounds = 12;
  // Optional split delta = A - B with both parts positive; tightens the
  // upper bound via ||A|| + ||B||.
  std::optional<std::pair<SuperOperator, SuperOperator>> positive_split;
};

// Exact norm of a positive map: sup_norm of the dual unit. Requires a
// positivity certificate unless the caller asserts positivity.
double norm_positive(const SuperOperator& delta, bool assume_positive = false);

// 1->1 norm of a general (signed) map. Lower bound from multi-start
// projected gradient ascent over rank-one extreme points; one-dimensional
// blocks are evaluated exactly and two-dimensional blocks additionally get
// an exhaustive, locally refined Bloch-sphere grid, which makes the
// estimate exact for those shapes. Upper bound from the tightest of the
// available certificates.
NormEstimate norm_1to1(const SuperOperator& delta,
                       const NormStrategy& strategy = {});

struct DominanceWitness {
  int block = 0;
  Vector psi;
  double eigenvalue = 0.0;  // negative eigenvalue found in (S-T)(psi psi*)
};

struct DominanceResult {
  bool dominated = false;
  // true only when a by-construction positive residual S-T was supplied
  bool certified = false;
  std::optional<DominanceWitness> witness;
};

// Searches for a rank-one direction on which (S-T) fails positivity.
// Dominated is a numerical verdict, not a proof, unless `certified_residual`
// (a positively certified map equal to S-T) is supplied.
DominanceResult dominance_check(const SuperOperator& T, const SuperOperator& S,
                                int budget = 32, std::uint64_t seed = 1,
                                const SuperOperator* certified_residual = nullptr);

// --- channel constructors ---------------------------------------------

// One Kraus operator, block-diagonal: one matrix per block.
struct KrausOperator {
  std::vector<Matrix> blocks;
};

SuperOperator make_kraus(const AlgebraShape& shape,
                         const std::vector<KrausOperator>& kraus,
                         bool require_tp = false);
// x -> (1-p) x + p tau(x)/tau(1) * 1
SuperOperator make_depolarizing(const AlgebraShape& shape, double p);
// Blockwise conjugation by the permutation matrix of sigma_k.
SuperOperator make_permutation(const AlgebraShape& shape,
                               const std::vector<std::vector<int>>& sigma);
// Diagonal-algebra embedding of a column-stochastic matrix (w.r.t. weights).
SuperOperator make_stochastic(const AlgebraShape& shape, const RealMatrix& A);
// x -> C o x entrywise, C Hermitian PSD with unit diagonal.
SuperOperator make_schur(const AlgebraShape& shape,
                         const std::vector<Matrix>& C);
SuperOperator make_convex(
    const std::vector<std::pair<double, SuperOperator>>& terms);
// A map diagonal in the fixed Hermitian basis; any two of these commute
// exactly. Positivity is whatever the caller can certify.
SuperOperator make_ggm_diagonal(const AlgebraShape& shape,
                                const RealVector& factors,
                                PositivityCertificate cert =
                                    PositivityCertificate::none());

// Worker-count for restart fan-out, from ZEROTWO_THREADS (default 1).
// Results are seed-deterministic regardless of the value.
int thread_count();

}  // namespace zerotwo

#endif
