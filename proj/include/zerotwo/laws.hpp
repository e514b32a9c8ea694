#ifndef ZEROTWO_LAWS_HPP
#define ZEROTWO_LAWS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zerotwo/superop.hpp"

namespace zerotwo {

// Exponents can leave the 64-bit range: the constructive n0 of the
// multi-parameter experiment scales like exp2(ell_eps), so indices carry
// arbitrary-precision entries. Powers stay cheap through binary
// exponentiation.
using BigInt = boost::multiprecision::cpp_int;

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<BigInt> entries) : e_(std::move(entries)) {}
  MultiIndex(std::initializer_list<std::uint64_t> entries);
  static MultiIndex zeros(int d);

  int dims() const { return static_cast<int>(e_.size()); }
  const BigInt& operator[](int i) const { return e_[i]; }
  BigInt& operator[](int i) { return e_[i]; }

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex scaled(const BigInt& l) const;
  BigInt total() const;  // |n| = sum of entries
  bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
  // componentwise n_i >= o_i
  bool dominates(const MultiIndex& o) const;
  std::string to_string() const;

 private:
  std::vector<BigInt> e_;
};

SuperOperator power_big(const SuperOperator& T, BigInt n);

// A family of commuting endomorphisms; pairwise commutation is verified at
// construction (max-abs commutator of the representations).
class CommutingFamily {
 public:
  explicit CommutingFamily(std::vector<SuperOperator> members,
                           double tol = 1e-9);
  int size() const { return static_cast<int>(members_.size()); }
  const SuperOperator& member(int i) const { return members_[i]; }
  const AlgebraShape& shape() const { return members_[0].domain(); }
  double max_commutation_defect() const { return defect_; }
  // Ordered product T_1^{n_1} ... T_d^{n_d}.
  SuperOperator multi_power(const MultiIndex& n) const;

 private:
  std::vector<SuperOperator> members_;
  double defect_ = 0.0;
};

// Total-variation functional of the halving polynomial: the exact value
// sum_j |C(l,j) - C(l,j-1)| / 2^l = 2 C(l, floor(l/2)) / 2^l, computed with
// exact integer binomials. It bounds the halving defect of any contraction
// and satisfies gamma(l) * sqrt(l) <= 2.
double gamma_oracle(std::uint64_t ell);
// Exact integer check of gamma(l) * sqrt(l) <= 2, i.e. l * C^2 <= 4^l.
bool gamma_sqrt_bound_holds(std::uint64_t ell);
// Same check for every l in [1, ell_max], sharing one running binomial.
bool verify_gamma_sqrt_bound(std::uint64_t ell_max);

// || (I + T^k)/2 )^l - T^k ((I + T^k)/2)^l ||, which gamma_oracle bounds.
NormEstimate halving_defect(const CommutingFamily& family, const MultiIndex& k,
                            std::uint64_t ell, const NormStrategy& = {});

// The recursive operator construction behind the multi-parameter law.
// Q_1 = (T^{m+k} - S)/2 + T^k (T^m - S)/2,
// Q_{l+1} = ((I+T^k)/2)^l Q_1 S^l + T^{m+k} Q_l, and at every l the
// telescoping identity T^{l(m+k)} = ((I+T^k)/2)^l S^l + Q_l must hold.
// The V table extends it to powers: V^{(1)}_l = S^l,
// V^{(d+1)}_l = T^{l(m+k)} V^{(d)}_l + V^{(1)}_l Q_l^d, with
// T^{dl(m+k)} = ((I+T^k)/2)^l V^{(d)}_l + Q_l^d.
struct ConstructionTrace {
  MultiIndex m;
  MultiIndex k;
  std::vector<SuperOperator> Q;   // Q[i] = Q_{i+1}
  std::vector<SuperOperator> V;   // V[i] = V^{(i+1)} at ell_v
  std::uint64_t ell_v = 0;        // the l at which V was tabulated
  double residual_q_identity = 0; // max over l of the Q-identity defect
  double residual_v_identity = 0; // max over d of the V-identity defect
  double gamma = 0.0;
  std::uint64_t ell_eps = 0;
  BigInt d_eps = 0;
  BigInt M_power = 0;
  MultiIndex n0;
};

ConstructionTrace q_sequence(const CommutingFamily& family,
                             const SuperOperator& S, const MultiIndex& m,
                             const MultiIndex& k, std::uint64_t ell_max,
                             double residual_tol = 1e-9);

ConstructionTrace v_table(const CommutingFamily& family,
                          const SuperOperator& S, const MultiIndex& m,
                          const MultiIndex& k, std::uint64_t ell, int d_max,
                          double residual_tol = 1e-9);

enum class Classification { ConvergesToZero, StaysNearTwo, Undetermined };

const char* classification_name(Classification c);

struct DichotomySample {
  MultiIndex n;
  NormEstimate norm;
};

struct ZeroTwoReport {
  MultiIndex k;
  double eps = 1e-3;
  std::vector<DichotomySample> samples;
  Classification classification = Classification::Undetermined;
  std::optional<MultiIndex> n_zero;  // tail below eps from here on
};

// Coordinate rays plus the diagonal ray, |n| up to n_max.
std::vector<MultiIndex> default_schedule(int d, std::uint64_t n_max);

ZeroTwoReport difference_norm_sequence(const CommutingFamily& family,
                                       const MultiIndex& k,
                                       const std::vector<MultiIndex>& schedule,
                                       double eps = 1e-3,
                                       const NormStrategy& = {});

// Dominance propagation: positive contractions with T <= S, ZS = SZ and
// ||Z(S^{n0} - T^{n0})|| < 1 keep ||Z(S^n - T^n)|| < 1 for all n >= n0.
struct DominancePropagationReport {
  std::uint64_t n_start = 1;
  std::uint64_t n_end = 1;
  std::vector<double> norms;    // index i holds n = n_start + i
  double worst_margin = 0.0;    // min over n of 1 - norm
  bool all_below_one = false;
};

DominancePropagationReport zn0_experiment(const SuperOperator& Z,
                                          const SuperOperator& T,
                                          const SuperOperator& S,
                                          std::uint64_t n0, std::uint64_t N,
                                          int dominance_budget = 16,
                                          std::uint64_t seed = 1);

struct MultiParamOptions {
  double eps = 0.1;
  std::uint64_t ell_cap = 200000;  // search cap for ell_eps
  // Cap for direct numerical verification of ||(Z Q)^{d_eps}||; beyond it
  // the value is certified through submultiplicativity instead.
  BigInt direct_power_cap = BigInt(1) << 22;
  int dominance_budget = 16;
  std::uint64_t seed = 1;
  std::uint64_t residual_ell_max = 5;  // audit depth for the Q/V residuals
  int residual_d_max = 5;
  std::vector<MultiIndex> extra_points;  // verified when >= n0
  NormStrategy norms;
};

struct MultiParamReport {
  double hyp_norm_mk = 0.0;  // ||Z(T^{m+k} - S)||
  double hyp_norm_m = 0.0;   // ||Z(T^m - S)||
  std::uint64_t ell_eps = 0;
  double gamma_at_ell = 0.0;
  // ||Z Q_l|| = ||1 - (S^l)*(1)||, held strictly below one; the margin is
  // the smallest eigenvalue of (S^l)*(1) and stays meaningful even when
  // the norm itself rounds to 1 in doubles.
  double zq_margin = 0.0;
  bool zq_margin_exact = false;  // margin taken from an exactly scalar dual unit
  double zq_norm_dual = 0.0;
  double zq_norm_direct = 0.0;
  BigInt d_eps = 0;
  BigInt M = 0;
  MultiIndex n0;
  bool d_eps_direct = false;     // ||(Z Q)^{d_eps}|| was computed directly
  double zq_power_norm = 0.0;    // direct value (when computed) or the bound
  std::vector<std::pair<MultiIndex, NormEstimate>> verification;
  bool conclusion_holds = false;
  ConstructionTrace trace;
};

// End-to-end run of the multi-parameter uniform zero-two machinery for a
// commuting unital family, a commuting Z and a dominated contraction S.
MultiParamReport theorem12_experiment(const SuperOperator& Z,
                                      const CommutingFamily& family,
                                      const SuperOperator& S,
                                      const MultiIndex& m, const MultiIndex& k,
                                      const MultiParamOptions& opts = {});

struct TwoParamSample {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  NormEstimate norm;
};

struct TwoParamReport {
  MultiParamReport inner;
  std::vector<TwoParamSample> table;  // ||T^{n+k}S^m - T^n S^m||
};

// Two commuting unital contractions T, S_map with a dominated contraction
// S_dom; reduces to the multi-parameter experiment with m = (m0, m0) and
// k = (k, 0).
TwoParamReport corollary14_experiment(const SuperOperator& T,
                                      const SuperOperator& S_map,
                                      const SuperOperator& S_dom,
                                      std::uint64_t m0, std::uint64_t k,
                                      std::uint64_t table_max = 16,
                                      const MultiParamOptions& opts = {});

// Classical (diagonal-algebra) lattice meet: entrywise minimum of the
// action matrices. Undefined off the diagonal case.
SuperOperator meet_classical(const SuperOperator& A, const SuperOperator& B);
// Action matrix of a diagonal-algebra map, (Tx)_i = sum_j A_ij x_j.
RealMatrix classical_action_matrix(const SuperOperator& T);

struct ZaharopolReport {
  double condition_i_value = 0.0;   // ||T^{m+1} - T^m||
  double condition_ii_value = 0.0;  // ||T^{m+1} - T^{m+1} ^ T^m||
  bool condition_i_holds = false;
  bool condition_ii_holds = false;
  bool implication_consistent = false;  // (i) => (ii) on this instance
  std::optional<ZeroTwoReport> decay;   // evaluated when (ii) holds
};

ZaharopolReport zaharopol_check(const SuperOperator& T, std::uint64_t m,
                                std::uint64_t n_max = 64, double eps = 1e-3,
                                const NormStrategy& = {});

}  // namespace zerotwo

#endif
