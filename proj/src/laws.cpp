#include "zerotwo/laws.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace zerotwo {

namespace mp = boost::multiprecision;

MultiIndex::MultiIndex(std::initializer_list<std::uint64_t> entries) {
  for (auto v : entries) e_.emplace_back(v);
}

MultiIndex MultiIndex::zeros(int d) {
  return MultiIndex(std::vector<BigInt>(static_cast<size_t>(d), BigInt(0)));
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  require(dims() == o.dims(), ErrorCode::InvalidInput,
          "multi-index dimension mismatch");
  std::vector<BigInt> out(e_);
  for (int i = 0; i < dims(); ++i) out[i] += o.e_[i];
  return MultiIndex(std::move(out));
}

MultiIndex MultiIndex::scaled(const BigInt& l) const {
  std::vector<BigInt> out(e_);
  for (auto& v : out) v *= l;
  return MultiIndex(std::move(out));
}

BigInt MultiIndex::total() const {
  BigInt t = 0;
  for (const auto& v : e_) t += v;
  return t;
}

bool MultiIndex::dominates(const MultiIndex& o) const {
  if (dims() != o.dims()) return false;
  for (int i = 0; i < dims(); ++i)
    if (e_[i] < o.e_[i]) return false;
  return true;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < dims(); ++i) {
    if (i) os << ",";
    os << e_[i];
  }
  os << ")";
  return os.str();
}

SuperOperator power_big(const SuperOperator& T, BigInt n) {
  require(n >= 0, ErrorCode::InvalidInput, "negative power");
  require(T.domain() == T.codomain(), ErrorCode::InvalidInput,
          "powers need an endomorphism");
  SuperOperator result = SuperOperator::identity(T.domain());
  SuperOperator base = T;
  while (n > 0) {
    if (mp::bit_test(n, 0)) result = result.compose(base);
    n >>= 1;
    if (n > 0) base = base.compose(base);
  }
  if (T.certificate().is_positive() && !result.certificate().is_positive())
    return result.with_certificate(
        PositivityCertificate::by_construction("power"));
  return result;
}

CommutingFamily::CommutingFamily(std::vector<SuperOperator> members,
                                 double tol)
    : members_(std::move(members)) {
  require(!members_.empty(), ErrorCode::InvalidInput,
          "a commuting family needs at least one member");
  for (const auto& t : members_) {
    require(t.domain() == t.codomain(), ErrorCode::InvalidInput,
            "family members must be endomorphisms");
    require(t.domain() == members_[0].domain(), ErrorCode::InvalidInput,
            "family members must share one algebra");
  }
  for (size_t i = 0; i < members_.size(); ++i) {
    for (size_t j = i + 1; j < members_.size(); ++j) {
      const double d = commutation_defect(members_[i], members_[j]);
      defect_ = std::max(defect_, d);
      if (d > tol) {
        std::ostringstream os;
        os << "members " << i << " and " << j
           << " do not commute (defect " << d << ")";
        fail(ErrorCode::CommutationViolated, os.str());
      }
    }
  }
}

SuperOperator CommutingFamily::multi_power(const MultiIndex& n) const {
  require(n.dims() == size(), ErrorCode::InvalidInput,
          "multi-index dimension must match the family size");
  SuperOperator result = SuperOperator::identity(shape());
  for (int i = 0; i < size(); ++i)
    result = result.compose(power_big(members_[i], n[i]));
  return result;
}

namespace {

BigInt central_binomial(std::uint64_t ell) {
  BigInt c = 1;
  const std::uint64_t m = ell / 2;
  for (std::uint64_t i = 1; i <= m; ++i) {
    c *= (ell - m + i);
    c /= i;  // exact at every step
  }
  return c;
}

}  // namespace

double gamma_oracle(std::uint64_t ell) {
  require(ell >= 1, ErrorCode::InvalidInput, "ell must be at least 1");
  mp::cpp_rational r(2 * central_binomial(ell), BigInt(1) << ell);
  return r.convert_to<double>();
}

bool gamma_sqrt_bound_holds(std::uint64_t ell) {
  require(ell >= 1, ErrorCode::InvalidInput, "ell must be at least 1");
  const BigInt c = central_binomial(ell);
  return BigInt(ell) * c * c <= (BigInt(1) << (2 * ell));
}

bool verify_gamma_sqrt_bound(std::uint64_t ell_max) {
  require(ell_max >= 1, ErrorCode::InvalidInput, "ell_max must be at least 1");
  BigInt c = 1;  // C(1, 0)
  for (std::uint64_t ell = 1; ell <= ell_max; ++ell) {
    if (BigInt(ell) * c * c > (BigInt(1) << (2 * ell))) return false;
    // advance the running central binomial to ell + 1
    const std::uint64_t m = ell / 2;
    if (ell % 2 == 0) {
      c *= (ell + 1);
      c /= (m + 1);
    } else {
      c *= 2;
    }
  }
  return true;
}

NormEstimate halving_defect(const CommutingFamily& family, const MultiIndex& k,
                            std::uint64_t ell, const NormStrategy& strategy) {
  SuperOperator P = family.multi_power(k);
  SuperOperator H =
      (SuperOperator::identity(P.domain()) + P).scale(0.5);
  SuperOperator Hl = H.power(ell);
  SuperOperator PHl = P.compose(Hl);
  NormStrategy strat = strategy;
  if (Hl.certificate().is_positive() && PHl.certificate().is_positive())
    strat.positive_split = std::make_pair(Hl, PHl);
  NormEstimate est = norm_1to1(Hl - PHl, strat);

  // For a contractive family the map expands into the halving polynomial
  // 2^-l sum_j (C(l,j) - C(l,j-1)) T^{jk}, so the exact total-variation
  // value certifies an upper bound.
  bool contractive = true;
  for (int i = 0; i < family.size(); ++i) {
    const SuperOperator& t = family.member(i);
    contractive = contractive && t.certificate().is_positive() &&
                  norm_positive(t) <= 1.0 + 1e-9;
  }
  if (contractive) {
    const double bound = gamma_oracle(ell);
    if (bound < est.upper) {
      est.upper = std::max(est.lower, bound);
      est.exact = est.upper - est.lower <= 1e-9;
    }
  }
  return est;
}

ConstructionTrace q_sequence(const CommutingFamily& family,
                             const SuperOperator& S, const MultiIndex& m,
                             const MultiIndex& k, std::uint64_t ell_max,
                             double residual_tol) {
  require(S.domain() == family.shape() && S.codomain() == family.shape(),
          ErrorCode::InvalidInput, "S must act on the family's algebra");
  require(m.dims() == family.size() && k.dims() == family.size(),
          ErrorCode::InvalidInput, "index dimensions must match the family");
  require(ell_max >= 1, ErrorCode::InvalidInput, "ell_max must be at least 1");

  ConstructionTrace trace;
  trace.m = m;
  trace.k = k;

  const SuperOperator Pmk = family.multi_power(m + k);
  const SuperOperator Pm = family.multi_power(m);
  const SuperOperator Pk = family.multi_power(k);
  const SuperOperator H =
      (SuperOperator::identity(family.shape()) + Pk).scale(0.5);

  const SuperOperator Q1 =
      (Pmk - S).scale(0.5) + Pk.compose(Pm - S).scale(0.5);
  trace.Q.push_back(Q1);

  SuperOperator Hpow = H;      // H^l
  SuperOperator Spow = S;      // S^l
  SuperOperator Tpow = Pmk;    // T^{l(m+k)}
  auto record_residual = [&](std::uint64_t ell) {
    const double r = (Tpow.rep() - Hpow.compose(Spow).rep() -
                      trace.Q.back().rep())
                         .cwiseAbs()
                         .maxCoeff();
    trace.residual_q_identity = std::max(trace.residual_q_identity, r);
    if (r > residual_tol) {
      std::ostringstream os;
      os << "telescoping identity residual " << r << " at level " << ell;
      fail(ErrorCode::IdentityResidualExceeded, os.str());
    }
  };
  record_residual(1);
  for (std::uint64_t ell = 1; ell < ell_max; ++ell) {
    SuperOperator Qnext =
        Hpow.compose(Q1).compose(Spow) + Pmk.compose(trace.Q.back());
    trace.Q.push_back(std::move(Qnext));
    Hpow = Hpow.compose(H);
    Spow = Spow.compose(S);
    Tpow = Tpow.compose(Pmk);
    record_residual(ell + 1);
  }
  return trace;
}

ConstructionTrace v_table(const CommutingFamily& family,
                          const SuperOperator& S, const MultiIndex& m,
                          const MultiIndex& k, std::uint64_t ell, int d_max,
                          double residual_tol) {
  require(d_max >= 1, ErrorCode::InvalidInput, "d_max must be at least 1");
  ConstructionTrace trace = q_sequence(family, S, m, k, ell, residual_tol);
  trace.ell_v = ell;
  const SuperOperator& Q = trace.Q.back();
  const SuperOperator Pk = family.multi_power(k);
  const SuperOperator Hl =
      (SuperOperator::identity(family.shape()) + Pk).scale(0.5).power(ell);
  const SuperOperator Tl = family.multi_power((m + k).scaled(ell));

  SuperOperator V = power_big(S, BigInt(ell));  // V^{(1)} = S^l
  trace.V.push_back(V);
  SuperOperator Qd = Q;        // Q^d
  SuperOperator Tdl = Tl;      // T^{dl(m+k)}
  for (int d = 1;; ++d) {
    const double r =
        (Tdl.rep() - Hl.compose(trace.V.back()).rep() - Qd.rep())
            .cwiseAbs()
            .maxCoeff();
    trace.residual_v_identity = std::max(trace.residual_v_identity, r);
    if (r > residual_tol) {
      std::ostringstream os;
      os << "power identity residual " << r << " at d = " << d;
      fail(ErrorCode::IdentityResidualExceeded, os.str());
    }
    if (d == d_max) break;
    SuperOperator Vnext = Tl.compose(trace.V.back()) + V.compose(Qd);
    trace.V.push_back(std::move(Vnext));
    Qd = Qd.compose(Q);
    Tdl = Tdl.compose(Tl);
  }
  return trace;
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::ConvergesToZero:
      return "converges-to-zero";
    case Classification::StaysNearTwo:
      return "stays-near-two";
    default:
      return "undetermined";
  }
}

std::vector<MultiIndex> default_schedule(int d, std::uint64_t n_max) {
  require(d >= 1, ErrorCode::InvalidInput, "dimension must be at least 1");
  std::vector<MultiIndex> points;
  std::set<std::string> seen;
  auto push = [&](const MultiIndex& n) {
    if (n.total() == 0 || n.total() > BigInt(n_max)) return;
    if (seen.insert(n.to_string()).second) points.push_back(n);
  };
  std::vector<std::uint64_t> steps;
  for (std::uint64_t t = 1; t <= std::min<std::uint64_t>(n_max, 20); ++t)
    steps.push_back(t);
  for (std::uint64_t t = 24; t <= n_max; t += 4) steps.push_back(t);
  for (int i = 0; i < d; ++i) {
    for (auto t : steps) {
      MultiIndex n = MultiIndex::zeros(d);
      n[i] = t;
      push(n);
    }
  }
  if (d > 1) {
    for (auto t : steps) {
      MultiIndex n(std::vector<BigInt>(static_cast<size_t>(d), BigInt(t)));
      push(n);
    }
  }
  std::sort(points.begin(), points.end(),
            [](const MultiIndex& a, const MultiIndex& b) {
              if (a.total() != b.total()) return a.total() < b.total();
              return a.to_string() < b.to_string();
            });
  return points;
}

ZeroTwoReport difference_norm_sequence(const CommutingFamily& family,
                                       const MultiIndex& k,
                                       const std::vector<MultiIndex>& schedule,
                                       double eps,
                                       const NormStrategy& strategy) {
  ZeroTwoReport report;
  report.k = k;
  report.eps = eps;
  bool certified = true;
  for (int i = 0; i < family.size(); ++i)
    certified = certified && family.member(i).certificate().is_positive();
  for (const auto& n : schedule) {
    SuperOperator A = family.multi_power(n + k);
    SuperOperator B = family.multi_power(n);
    NormStrategy strat = strategy;
    if (certified) strat.positive_split = std::make_pair(A, B);
    report.samples.push_back(DichotomySample{n, norm_1to1(A - B, strat)});
  }

  // zero branch: the first scheduled point whose componentwise tail stays
  // below eps
  for (const auto& cand : report.samples) {
    bool ok = true;
    for (const auto& s : report.samples)
      if (s.n.dominates(cand.n) && s.norm.upper >= eps) {
        ok = false;
        break;
      }
    if (ok) {
      report.n_zero = cand.n;
      report.classification = Classification::ConvergesToZero;
      return report;
    }
  }
  bool near_two = !report.samples.empty();
  for (const auto& s : report.samples)
    near_two = near_two && s.norm.lower > 2.0 - 1e-6;
  report.classification = near_two ? Classification::StaysNearTwo
                                   : Classification::Undetermined;
  return report;
}

namespace {

void check_positive_contraction(const SuperOperator& op, const char* name) {
  if (!op.certificate().is_positive()) {
    fail(ErrorCode::PremiseViolated,
         std::string(name) + " carries no positivity certificate");
  }
  const double nrm = norm_positive(op);
  if (nrm > 1.0 + 1e-9) {
    std::ostringstream os;
    os << name << " is not a contraction (norm " << nrm << ")";
    fail(ErrorCode::PremiseViolated, os.str());
  }
}

void check_unital(const SuperOperator& op, const char* name) {
  if (!op.is_unital_dual(1e-9)) {
    fail(ErrorCode::PremiseViolated,
         std::string(name) + " is not unital (dual unit differs from 1)");
  }
}

// Smallest eigenvalue of a positive dual unit. When the element is exactly
// scalar the value is exact even at magnitudes near the double underflow
// threshold; otherwise the eigensolver value is discounted by a resolution
// guard so the margin stays a valid lower bound.
std::pair<double, bool> dual_unit_min_eigenvalue(const HermitianElement& u) {
  bool scalar = true;
  double min_scalar = std::numeric_limits<double>::infinity();
  for (int k = 0; k < u.block_count() && scalar; ++k) {
    const Matrix& b = u.block(k);
    const double c = b(0, 0).real();
    for (int i = 0; i < b.rows() && scalar; ++i) {
      for (int j = 0; j < b.cols() && scalar; ++j) {
        if (i == j) {
          scalar = b(i, j).imag() == 0.0 && b(i, j).real() == c;
        } else {
          scalar = b(i, j) == Complex(0.0, 0.0);
        }
      }
    }
    min_scalar = std::min(min_scalar, c);
  }
  if (scalar) return {min_scalar, true};
  double lam = std::numeric_limits<double>::infinity();
  for (int k = 0; k < u.block_count(); ++k)
    lam = std::min(lam, hermitian_eigenvalues(u.block(k))[0]);
  return {lam - 1e-12 * std::max(1.0, sup_norm(u)), false};
}

}  // namespace

DominancePropagationReport zn0_experiment(const SuperOperator& Z,
                                          const SuperOperator& T,
                                          const SuperOperator& S,
                                          std::uint64_t n0, std::uint64_t N,
                                          int dominance_budget,
                                          std::uint64_t seed) {
  require(n0 >= 1 && N >= n0, ErrorCode::InvalidInput,
          "need 1 <= n0 <= N");
  check_positive_contraction(Z, "Z");
  check_positive_contraction(T, "T");
  check_positive_contraction(S, "S");
  if (commutation_defect(Z, S) > 1e-9)
    fail(ErrorCode::PremiseViolated, "Z and S do not commute");
  if (!dominance_check(T, S, dominance_budget, seed).dominated)
    fail(ErrorCode::PremiseViolated, "T <= S fails");

  SuperOperator Spow = power_big(S, BigInt(n0));
  SuperOperator Tpow = power_big(T, BigInt(n0));
  const double base = norm_positive(Z.compose(Spow - Tpow), true);
  if (base >= 1.0 - 1e-9) {
    std::ostringstream os;
    os << "||Z(S^{n0} - T^{n0})|| = " << base << " is not below one";
    fail(ErrorCode::PremiseViolated, os.str());
  }

  DominancePropagationReport report;
  report.n_start = n0;
  report.n_end = N;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::uint64_t n = n0; n <= N; ++n) {
    const double v = norm_positive(Z.compose(Spow - Tpow), true);
    report.norms.push_back(v);
    report.worst_margin = std::min(report.worst_margin, 1.0 - v);
    if (n < N) {
      Spow = S.compose(Spow);
      Tpow = T.compose(Tpow);
    }
  }
  report.all_below_one = report.worst_margin > 0.0;
  return report;
}

MultiParamReport theorem12_experiment(const SuperOperator& Z,
                                      const CommutingFamily& family,
                                      const SuperOperator& S,
                                      const MultiIndex& m, const MultiIndex& k,
                                      const MultiParamOptions& opts) {
  require(m.dims() == family.size() && k.dims() == family.size(),
          ErrorCode::InvalidInput, "index dimensions must match the family");
  check_positive_contraction(Z, "Z");
  check_unital(Z, "Z");
  for (int i = 0; i < family.size(); ++i) {
    check_positive_contraction(family.member(i), "family member");
    check_unital(family.member(i), "family member");
    if (commutation_defect(Z, family.member(i)) > 1e-9)
      fail(ErrorCode::PremiseViolated, "Z does not commute with the family");
  }
  check_positive_contraction(S, "S");
  if (commutation_defect(Z, S) > 1e-9)
    fail(ErrorCode::PremiseViolated, "Z and S do not commute");

  MultiParamReport report;
  const SuperOperator Pmk = family.multi_power(m + k);
  const SuperOperator Pm = family.multi_power(m);
  const SuperOperator ZS = Z.compose(S);

  if (!dominance_check(ZS, Z.compose(Pmk), opts.dominance_budget, opts.seed)
           .dominated)
    fail(ErrorCode::PremiseViolated, "Z T^{m+k} >= Z S fails");
  if (!dominance_check(ZS, Z.compose(Pm), opts.dominance_budget, opts.seed)
           .dominated)
    fail(ErrorCode::PremiseViolated, "Z T^m >= Z S fails");

  report.hyp_norm_mk = norm_positive(Z.compose(Pmk - S), true);
  report.hyp_norm_m = norm_positive(Z.compose(Pm - S), true);
  if (report.hyp_norm_mk >= 1.0 - 1e-9)
    fail(ErrorCode::PremiseViolated, "||Z(T^{m+k} - S)|| is not below one");
  if (report.hyp_norm_m >= 1.0 - 1e-9)
    fail(ErrorCode::PremiseViolated, "||Z(T^m - S)|| is not below one");

  // smallest l with gamma(l) < eps/2
  std::uint64_t ell = 1;
  double g = gamma_oracle(1);
  while (g >= 0.5 * opts.eps && ell < opts.ell_cap) {
    ++ell;
    g = gamma_oracle(ell);
  }
  if (g >= 0.5 * opts.eps)
    fail(ErrorCode::SearchExhausted, "ell_eps exceeds the search cap");
  report.ell_eps = ell;
  report.gamma_at_ell = g;

  report.trace = q_sequence(family, S, m, k, ell);
  report.trace.gamma = g;
  report.trace.ell_eps = ell;
  {
    // audit the V-table identities at desk scale
    const std::uint64_t ell_v = std::min<std::uint64_t>(
        std::max<std::uint64_t>(opts.residual_ell_max, 1), ell);
    ConstructionTrace vt =
        v_table(family, S, m, k, ell_v, opts.residual_d_max);
    report.trace.V = vt.V;
    report.trace.ell_v = ell_v;
    report.trace.residual_v_identity = vt.residual_v_identity;
  }

  const SuperOperator& Q = report.trace.Q.back();
  const SuperOperator ZQ = Z.compose(Q);

  // ||Z Q_l|| two ways: the dual-unit identity 1 - (S^l)*(1) and the
  // direct positive-map norm. The margin below one is the smallest
  // eigenvalue of (S^l)*(1).
  const HermitianElement su = power_big(S, BigInt(ell)).dual_unit();
  report.zq_norm_dual =
      sup_norm(HermitianElement::identity(family.shape()) - su);
  report.zq_norm_direct = norm_positive(ZQ, true);
  auto [margin, margin_exact] = dual_unit_min_eigenvalue(su);
  report.zq_margin = margin;
  report.zq_margin_exact = margin_exact;
  if (!(margin > 0.0))
    fail(ErrorCode::SearchExhausted,
         "||Z Q_l|| < 1 has no resolvable margin; d_eps is out of reach");

  // d_eps: search directly while the powers are computable, otherwise
  // certify through submultiplicativity ||(ZQ)^d|| <= ||ZQ||^d.
  const double eps4 = 0.25 * opts.eps;
  const double log_q = std::log1p(-margin);
  bool direct = false;
  BigInt d_eps = 0;
  double power_norm = 0.0;
  if (margin > 1e-9) {
    auto norm_at = [&](BigInt d) {
      return norm_positive(power_big(ZQ, d), true);
    };
    BigInt lo = 1, hi = 1;
    double v = norm_at(hi);
    while (v >= eps4 && hi <= opts.direct_power_cap) {
      lo = hi;
      hi *= 2;
      v = norm_at(hi);
    }
    if (v < eps4) {
      // minimal d by bisection; the norm sequence is nonincreasing
      while (lo + 1 < hi) {
        BigInt mid = (lo + hi) / 2;
        if (norm_at(mid) < eps4)
          hi = mid;
        else
          lo = mid;
      }
      d_eps = hi;
      power_norm = norm_at(hi);
      direct = true;
    }
  }
  if (!direct) {
    const double dd = std::ceil(std::log(eps4) / log_q);
    if (!std::isfinite(dd))
      fail(ErrorCode::SearchExhausted, "d_eps is not representable");
    d_eps = BigInt(std::max(dd, 1.0));
    power_norm = std::exp(static_cast<double>(d_eps.convert_to<double>()) *
                          log_q);
    if (d_eps <= opts.direct_power_cap) {
      const double v = norm_positive(power_big(ZQ, d_eps), true);
      power_norm = v;
      direct = v < eps4;
    }
  }
  report.d_eps = d_eps;
  report.d_eps_direct = direct;
  report.zq_power_norm = power_norm;
  report.M = d_eps;
  report.n0 = (m + k).scaled(d_eps * BigInt(ell));
  report.trace.d_eps = d_eps;
  report.trace.M_power = d_eps;
  report.trace.n0 = report.n0;

  // verification points at and beyond n0
  std::vector<MultiIndex> points = {report.n0, report.n0 + k,
                                    report.n0 + m + k,
                                    report.n0.scaled(2)};
  for (const auto& p : opts.extra_points)
    if (p.dominates(report.n0)) points.push_back(p);
  std::set<std::string> seen;
  const SuperOperator Zm = power_big(Z, report.M);
  report.conclusion_holds = true;
  for (const auto& n : points) {
    if (!seen.insert(n.to_string()).second) continue;
    SuperOperator A = Zm.compose(family.multi_power(n + k));
    SuperOperator B = Zm.compose(family.multi_power(n));
    NormStrategy strat = opts.norms;
    if (A.certificate().is_positive() && B.certificate().is_positive())
      strat.positive_split = std::make_pair(A, B);
    NormEstimate est = norm_1to1(A - B, strat);
    report.conclusion_holds =
        report.conclusion_holds && est.upper < opts.eps;
    report.verification.emplace_back(n, est);
  }
  return report;
}

TwoParamReport corollary14_experiment(const SuperOperator& T,
                                      const SuperOperator& S_map,
                                      const SuperOperator& S_dom,
                                      std::uint64_t m0, std::uint64_t k,
                                      std::uint64_t table_max,
                                      const MultiParamOptions& opts) {
  CommutingFamily family({T, S_map});
  TwoParamReport report;
  report.inner = theorem12_experiment(
      SuperOperator::identity(family.shape()), family, S_dom,
      MultiIndex{m0, m0}, MultiIndex{k, 0}, opts);

  bool certified = T.certificate().is_positive() &&
                   S_map.certificate().is_positive();
  for (std::uint64_t n = 1; n <= table_max; ++n) {
    for (std::uint64_t mm = 1; mm <= table_max; mm += 5) {
      SuperOperator A = family.multi_power(MultiIndex{n + k, mm});
      SuperOperator B = family.multi_power(MultiIndex{n, mm});
      NormStrategy strat = opts.norms;
      if (certified) strat.positive_split = std::make_pair(A, B);
      report.table.push_back(TwoParamSample{n, mm, norm_1to1(A - B, strat)});
    }
  }
  return report;
}

RealMatrix classical_action_matrix(const SuperOperator& T) {
  require(T.domain().is_diagonal() && T.domain() == T.codomain(),
          ErrorCode::InvalidInput,
          "classical action needs a diagonal algebra endomorphism");
  const AlgebraShape& shape = T.domain();
  const int n = shape.block_count();
  RealMatrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      A(i, j) = T.rep()(i, j) * std::sqrt(shape.block(j).weight /
                                          shape.block(i).weight);
  return A;
}

namespace {

SuperOperator classical_from_matrix(const AlgebraShape& shape,
                                    const RealMatrix& A) {
  const int n = shape.block_count();
  RealMatrix rep(n, n);
  bool nonneg = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rep(i, j) = A(i, j) * std::sqrt(shape.block(i).weight /
                                      shape.block(j).weight);
      nonneg = nonneg && A(i, j) >= 0.0;
    }
  }
  // entrywise nonnegativity is exactly positivity on a diagonal algebra
  return SuperOperator(shape, shape, std::move(rep),
                       nonneg ? PositivityCertificate::by_construction(
                                    "classical-nonnegative")
                              : PositivityCertificate::none());
}

}  // namespace

SuperOperator meet_classical(const SuperOperator& A, const SuperOperator& B) {
  require(A.domain() == B.domain() && A.codomain() == B.codomain(),
          ErrorCode::InvalidInput, "meet needs matching shapes");
  require(A.domain().is_diagonal(), ErrorCode::InvalidInput,
          "the lattice meet is only defined on diagonal algebras here");
  const RealMatrix ma = classical_action_matrix(A);
  const RealMatrix mb = classical_action_matrix(B);
  return classical_from_matrix(A.domain(), ma.cwiseMin(mb));
}

ZaharopolReport zaharopol_check(const SuperOperator& T, std::uint64_t m,
                                std::uint64_t n_max, double eps,
                                const NormStrategy& strategy) {
  require(T.domain().is_diagonal(), ErrorCode::InvalidInput,
          "the meet condition needs a diagonal algebra");
  require(m >= 1, ErrorCode::InvalidInput, "m must be at least 1");
  check_positive_contraction(T, "T");

  ZaharopolReport report;
  SuperOperator Tm = T.power(m);
  SuperOperator Tm1 = T.power(m + 1);
  SuperOperator meet = meet_classical(Tm1, Tm);
  report.condition_i_value = norm_1to1(Tm1 - Tm, strategy).lower;
  report.condition_ii_value = norm_1to1(Tm1 - meet, strategy).lower;
  report.condition_i_holds = report.condition_i_value < 2.0 - 1e-9;
  report.condition_ii_holds = report.condition_ii_value < 1.0 - 1e-9;
  report.implication_consistent =
      !report.condition_i_holds || report.condition_ii_holds;
  if (report.condition_ii_holds) {
    CommutingFamily family({T});
    report.decay = difference_norm_sequence(
        family, MultiIndex{1}, default_schedule(1, n_max), eps, strategy);
  }
  return report;
}

}  // namespace zerotwo
