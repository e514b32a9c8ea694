#include "zerotwo/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "zerotwo/bundle.hpp"
#include "zerotwo/laws.hpp"
#include "zerotwo/version.hpp"

namespace zerotwo {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void schema_fail(const std::string& path,
                              const std::string& what) {
  fail(ErrorCode::SchemaViolation, "config field '" + path + "': " + what);
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& required,
                const std::set<std::string>& optional) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!required.count(key) && !optional.count(key))
      schema_fail(path + "." + key, "unknown key");
  }
  for (const auto& key : required)
    if (!j.contains(key)) schema_fail(path + "." + key, "missing");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

std::uint64_t get_unsigned(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) schema_fail(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) schema_fail(path, "expected a string");
  return j.get<std::string>();
}

// --- config -> domain objects ------------------------------------------

AlgebraShape parse_algebra(const json& j, const std::string& path) {
  check_keys(j, path, {"blocks"}, {});
  const json& blocks = j.at("blocks");
  if (!blocks.is_array() || blocks.empty())
    schema_fail(path + ".blocks", "expected a nonempty array");
  std::vector<BlockSpec> specs;
  for (size_t i = 0; i < blocks.size(); ++i) {
    const std::string bp = path + ".blocks[" + std::to_string(i) + "]";
    check_keys(blocks[i], bp, {"dim"}, {"weight"});
    BlockSpec b;
    b.dim = static_cast<int>(get_unsigned(blocks[i].at("dim"), bp + ".dim"));
    b.weight = blocks[i].contains("weight")
                   ? get_number(blocks[i].at("weight"), bp + ".weight")
                   : 1.0;
    if (b.dim < 1) schema_fail(bp + ".dim", "must be at least 1");
    if (!(b.weight > 0.0)) schema_fail(bp + ".weight", "must be positive");
    specs.push_back(b);
  }
  return AlgebraShape(specs);
}

BundleAlgebra parse_bundle(const json& j, const std::string& path) {
  check_keys(j, path, {"atoms"}, {});
  const json& atoms = j.at("atoms");
  if (!atoms.is_array() || atoms.empty())
    schema_fail(path + ".atoms", "expected a nonempty array");
  FiniteMeasureSpace base;
  std::vector<AlgebraShape> fibers;
  for (size_t i = 0; i < atoms.size(); ++i) {
    const std::string ap = path + ".atoms[" + std::to_string(i) + "]";
    check_keys(atoms[i], ap, {"label", "blocks"}, {"mass"});
    base.atoms.push_back(get_string(atoms[i].at("label"), ap + ".label"));
    base.masses.push_back(atoms[i].contains("mass")
                              ? get_number(atoms[i].at("mass"), ap + ".mass")
                              : 1.0);
    if (!(base.masses.back() > 0.0)) schema_fail(ap + ".mass", "must be positive");
    json fiber;
    fiber["blocks"] = atoms[i].at("blocks");
    fibers.push_back(parse_algebra(fiber, ap));
  }
  return BundleAlgebra(std::move(base), std::move(fibers));
}

Matrix parse_complex_matrix(const json& j, int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    schema_fail(path, "expected " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      schema_fail(path, "expected " + std::to_string(n) + " columns");
    for (int c = 0; c < n; ++c) {
      const json& e = row[c];
      const std::string ep = path + "[" + std::to_string(r) + "][" +
                             std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2)
        schema_fail(ep, "expected an [re, im] pair");
      m(r, c) = Complex(get_number(e[0], ep), get_number(e[1], ep));
    }
  }
  return m;
}

RealMatrix parse_real_matrix(const json& j, int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    schema_fail(path, "expected " + std::to_string(n) + " rows");
  RealMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      schema_fail(path, "expected " + std::to_string(n) + " columns");
    for (int c = 0; c < n; ++c)
      m(r, c) = get_number(row[c],
                           path + "[" + std::to_string(r) + "]");
  }
  return m;
}

class ChannelContext {
 public:
  ChannelContext(const json* channels, AlgebraShape shape)
      : channels_(channels), shape_(std::move(shape)) {}

  SuperOperator named(const std::string& name, const std::string& path) {
    auto it = built_.find(name);
    if (it != built_.end()) return it->second;
    if (!channels_ || !channels_->contains(name))
      schema_fail(path, "references unknown channel '" + name + "'");
    if (!building_.insert(name).second)
      schema_fail(path, "channel '" + name + "' references itself");
    SuperOperator op = build(channels_->at(name), "channels." + name);
    building_.erase(name);
    built_.emplace(name, op);
    return op;
  }

  SuperOperator build(const json& spec, const std::string& path) {
    if (!spec.is_object()) schema_fail(path, "expected an object");
    if (spec.contains("ref")) {
      check_keys(spec, path, {"ref"}, {});
      return named(get_string(spec.at("ref"), path + ".ref"), path);
    }
    if (!spec.contains("kind")) schema_fail(path + ".kind", "missing");
    const std::string kind = get_string(spec.at("kind"), path + ".kind");
    if (kind == "identity") {
      check_keys(spec, path, {"kind"}, {});
      return SuperOperator::identity(shape_);
    }
    if (kind == "depolarizing") {
      check_keys(spec, path, {"kind", "p"}, {});
      return make_depolarizing(shape_, get_number(spec.at("p"), path + ".p"));
    }
    if (kind == "kraus") {
      check_keys(spec, path, {"kind", "operators"}, {"require_tp"});
      const json& ops = spec.at("operators");
      if (!ops.is_array() || ops.empty())
        schema_fail(path + ".operators", "expected a nonempty array");
      std::vector<KrausOperator> kraus;
      for (size_t i = 0; i < ops.size(); ++i) {
        const std::string op_path =
            path + ".operators[" + std::to_string(i) + "]";
        if (!ops[i].is_array() ||
            static_cast<int>(ops[i].size()) != shape_.block_count())
          schema_fail(op_path, "expected one matrix per block");
        KrausOperator K;
        for (int k = 0; k < shape_.block_count(); ++k)
          K.blocks.push_back(parse_complex_matrix(
              ops[i][k], shape_.block(k).dim,
              op_path + "[" + std::to_string(k) + "]"));
        kraus.push_back(std::move(K));
      }
      const bool tp = spec.contains("require_tp") &&
                      spec.at("require_tp").is_boolean() &&
                      spec.at("require_tp").get<bool>();
      return make_kraus(shape_, kraus, tp);
    }
    if (kind == "permutation") {
      check_keys(spec, path, {"kind", "sigma"}, {});
      const json& sig = spec.at("sigma");
      if (!sig.is_array() ||
          static_cast<int>(sig.size()) != shape_.block_count())
        schema_fail(path + ".sigma", "expected one permutation per block");
      std::vector<std::vector<int>> sigma;
      for (int k = 0; k < shape_.block_count(); ++k) {
        std::vector<int> p;
        for (const auto& v : sig[k])
          p.push_back(static_cast<int>(
              get_unsigned(v, path + ".sigma[" + std::to_string(k) + "]")));
        sigma.push_back(std::move(p));
      }
      return make_permutation(shape_, sigma);
    }
    if (kind == "stochastic") {
      check_keys(spec, path, {"kind", "matrix"}, {});
      return make_stochastic(
          shape_, parse_real_matrix(spec.at("matrix"), shape_.block_count(),
                                    path + ".matrix"));
    }
    if (kind == "schur") {
      check_keys(spec, path, {"kind", "blocks"}, {});
      const json& blocks = spec.at("blocks");
      if (!blocks.is_array() ||
          static_cast<int>(blocks.size()) != shape_.block_count())
        schema_fail(path + ".blocks", "expected one multiplier per block");
      std::vector<Matrix> C;
      for (int k = 0; k < shape_.block_count(); ++k)
        C.push_back(parse_complex_matrix(
            blocks[k], shape_.block(k).dim,
            path + ".blocks[" + std::to_string(k) + "]"));
      return make_schur(shape_, C);
    }
    if (kind == "convex") {
      check_keys(spec, path, {"kind", "terms"}, {});
      const json& terms = spec.at("terms");
      if (!terms.is_array() || terms.empty())
        schema_fail(path + ".terms", "expected a nonempty array");
      std::vector<std::pair<double, SuperOperator>> parts;
      for (size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = path + ".terms[" + std::to_string(i) + "]";
        check_keys(terms[i], tp, {"weight", "channel"}, {});
        parts.emplace_back(get_number(terms[i].at("weight"), tp + ".weight"),
                           build(terms[i].at("channel"), tp + ".channel"));
      }
      return make_convex(parts);
    }
    if (kind == "scale") {
      check_keys(spec, path, {"kind", "factor", "channel"}, {});
      return build(spec.at("channel"), path + ".channel")
          .scale(get_number(spec.at("factor"), path + ".factor"));
    }
    if (kind == "compose") {
      check_keys(spec, path, {"kind", "channels"}, {});
      const json& list = spec.at("channels");
      if (!list.is_array() || list.empty())
        schema_fail(path + ".channels", "expected a nonempty array");
      // listed order is application order: [A, B] maps x to B(A(x))
      SuperOperator op =
          build(list[0], path + ".channels[0]");
      for (size_t i = 1; i < list.size(); ++i)
        op = build(list[i], path + ".channels[" + std::to_string(i) + "]")
                 .compose(op);
      return op;
    }
    if (kind == "power") {
      check_keys(spec, path, {"kind", "exponent", "channel"}, {});
      return build(spec.at("channel"), path + ".channel")
          .power(get_unsigned(spec.at("exponent"), path + ".exponent"));
    }
    if (kind == "ggm-diagonal") {
      check_keys(spec, path, {"kind", "factors"}, {"check_positivity"});
      const json& f = spec.at("factors");
      if (!f.is_array() || static_cast<int>(f.size()) != shape_.herm_dim())
        schema_fail(path + ".factors",
                    "expected one factor per Hermitian basis element");
      RealVector factors(shape_.herm_dim());
      for (int i = 0; i < shape_.herm_dim(); ++i)
        factors[i] = get_number(f[i], path + ".factors");
      SuperOperator op = make_ggm_diagonal(shape_, factors);
      if (spec.contains("check_positivity")) {
        const int budget = static_cast<int>(get_unsigned(
            spec.at("check_positivity"), path + ".check_positivity"));
        DominanceResult r =
            dominance_check(SuperOperator::zero(shape_), op, budget);
        require(r.dominated, ErrorCode::InvalidInput,
                "ggm-diagonal channel failed positivity falsification");
        return op.with_certificate(PositivityCertificate::checked(budget));
      }
      return op;
    }
    schema_fail(path + ".kind", "unknown channel kind '" + kind + "'");
  }

 private:
  const json* channels_;
  AlgebraShape shape_;
  std::map<std::string, SuperOperator> built_;
  std::set<std::string> building_;
};

// --- serialization helpers ----------------------------------------------

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json big_to_json(const BigInt& v) {
  if (v <= BigInt(1) << 53 && v >= -(BigInt(1) << 53))
    return json(v.convert_to<std::int64_t>());
  return json(v.str());
}

json index_to_json(const MultiIndex& n) {
  json out = json::array();
  for (int i = 0; i < n.dims(); ++i) out.push_back(big_to_json(n[i]));
  return out;
}

json estimate_to_json(const NormEstimate& e) {
  return json{{"lower", e.lower}, {"upper", e.upper}, {"exact", e.exact}};
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) {
    for (size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ",";
      out_ << header[i];
    }
    out_ << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    require(f.good(), ErrorCode::IoError,
            "cannot open " + tmp.string() + " for writing");
    f << content;
    require(f.good(), ErrorCode::IoError, "write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

// Minimal decay plot: log10 of the norm upper bound against |n| (or the
// sample index when |n| does not fit a double).
std::string svg_plot(const std::vector<std::pair<double, double>>& points,
                     const std::string& title) {
  const double W = 640, H = 400, L = 60, B = 40;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto [x, y] : points) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (points.empty()) xmin = xmax = ymin = ymax = 0;
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  std::ostringstream s;
  s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
    << H << "'>\n";
  s << "<rect width='100%' height='100%' fill='white'/>\n";
  s << "<text x='" << W / 2 << "' y='16' text-anchor='middle' "
    << "font-family='monospace' font-size='12'>" << title << "</text>\n";
  s << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - 10
    << "' y2='" << H - B << "' stroke='black'/>\n";
  s << "<line x1='" << L << "' y1='" << H - B << "' x2='" << L
    << "' y2='20' stroke='black'/>\n";
  s << "<text x='" << W / 2 << "' y='" << H - 8
    << "' text-anchor='middle' font-family='monospace' font-size='11'>|n|"
    << "</text>\n";
  s << "<text x='14' y='" << H / 2
    << "' text-anchor='middle' font-family='monospace' font-size='11' "
    << "transform='rotate(-90 14 " << H / 2 << ")'>log10 norm</text>\n";
  s << "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
  for (auto [x, y] : points) {
    const double px = L + (x - xmin) / (xmax - xmin) * (W - 10 - L);
    const double py = (H - B) - (y - ymin) / (ymax - ymin) * (H - B - 20);
    s << fmt(px) << "," << fmt(py) << " ";
  }
  s << "'/>\n</svg>\n";
  return s.str();
}

double log10_clamped(double v) {
  return std::log10(std::max(v, 1e-18));
}

// --- experiment context ---------------------------------------------------

struct Artifacts {
  json report;
  bool verdict_ok = false;
  std::string verdict;
  // (suffix, content); suffix "" is the main csv <name>.csv
  std::vector<std::pair<std::string, std::string>> csv;
  std::vector<std::pair<double, double>> plot;  // (|n|, log10 norm)
  std::string plot_title;
};

struct ParsedConfig {
  json raw;
  std::string name;
  std::string kind;
  std::uint64_t seed = 1;
  double eps = 1e-3;
  int restarts = 64;
  std::uint64_t n_max = 64;
  std::vector<std::vector<std::uint64_t>> extra_points;
  std::optional<std::string> expect_classification;
};

NormStrategy strategy_for(const ParsedConfig& cfg) {
  NormStrategy s;
  s.seed = cfg.seed;
  s.restarts = cfg.restarts;
  return s;
}

std::vector<MultiIndex> schedule_for(const ParsedConfig& cfg, int d) {
  std::vector<MultiIndex> sched = default_schedule(d, cfg.n_max);
  for (const auto& p : cfg.extra_points) {
    if (static_cast<int>(p.size()) != d)
      fail(ErrorCode::SchemaViolation,
           "schedule.points entries must have dimension " + std::to_string(d));
    std::vector<BigInt> entries(p.begin(), p.end());
    sched.push_back(MultiIndex(std::move(entries)));
  }
  return sched;
}

json dichotomy_report(const ZeroTwoReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    json e = estimate_to_json(s.norm);
    e["n"] = index_to_json(s.n);
    samples.push_back(e);
  }
  json out{{"classification", classification_name(r.classification)},
           {"eps", r.eps},
           {"samples", samples}};
  if (r.n_zero) out["n_zero"] = index_to_json(*r.n_zero);
  return out;
}

void dichotomy_csv(Artifacts& a, const ZeroTwoReport& r, int d) {
  std::vector<std::string> header;
  for (int i = 1; i <= d; ++i) header.push_back("n_" + std::to_string(i));
  header.insert(header.end(), {"lower", "upper", "exact"});
  Csv csv(header);
  for (const auto& s : r.samples) {
    std::vector<std::string> cells;
    for (int i = 0; i < d; ++i) cells.push_back(s.n[i].str());
    cells.push_back(fmt(s.norm.lower));
    cells.push_back(fmt(s.norm.upper));
    cells.push_back(s.norm.exact ? "1" : "0");
    csv.row(cells);
    const double total = s.n.total() < (BigInt(1) << 60)
                             ? s.n.total().convert_to<double>()
                             : -1.0;
    if (total >= 0)
      a.plot.emplace_back(total, log10_clamped(s.norm.upper));
  }
  a.csv.emplace_back("", csv.str());
}

// --- per-kind runners -----------------------------------------------------

Artifacts run_norm(const ParsedConfig& cfg, ChannelContext& ctx,
                   const json& params) {
  check_keys(params, "params", {"channel"}, {"subtract"});
  SuperOperator op = ctx.build(params.at("channel"), "params.channel");
  if (params.contains("subtract"))
    op = op - ctx.build(params.at("subtract"), "params.subtract");
  NormEstimate est = norm_1to1(op, strategy_for(cfg));

  Artifacts a;
  a.report["estimate"] = estimate_to_json(est);
  if (op.certificate().is_positive())
    a.report["norm_positive"] = norm_positive(op);
  Csv csv({"lower", "upper", "exact"});
  csv.row({fmt(est.lower), fmt(est.upper), est.exact ? "1" : "0"});
  a.csv.emplace_back("", csv.str());
  // representation matrix for external diffing
  std::ostringstream m;
  for (int r = 0; r < op.rep().rows(); ++r) {
    for (int c = 0; c < op.rep().cols(); ++c) {
      if (c) m << ",";
      m << fmt(op.rep()(r, c));
    }
    m << "\n";
  }
  a.csv.emplace_back("-matrix", m.str());
  a.verdict_ok = true;
  a.verdict = "norm computed";
  return a;
}

Artifacts run_dichotomy(const ParsedConfig& cfg, ChannelContext& ctx,
                        const json& params) {
  check_keys(params, "params", {"family", "k"}, {});
  const json& fam_names = params.at("family");
  if (!fam_names.is_array() || fam_names.empty())
    schema_fail("params.family", "expected a nonempty array");
  std::vector<SuperOperator> members;
  for (size_t i = 0; i < fam_names.size(); ++i)
    members.push_back(ctx.named(
        get_string(fam_names[i], "params.family"), "params.family"));
  CommutingFamily family(std::move(members));
  const json& kj = params.at("k");
  if (!kj.is_array() || kj.size() != fam_names.size())
    schema_fail("params.k", "expected one entry per family member");
  std::vector<BigInt> kk;
  for (size_t i = 0; i < kj.size(); ++i)
    kk.emplace_back(get_unsigned(kj[i], "params.k"));
  MultiIndex k(std::move(kk));

  ZeroTwoReport r = difference_norm_sequence(
      family, k, schedule_for(cfg, family.size()), cfg.eps,
      strategy_for(cfg));

  Artifacts a;
  a.report = dichotomy_report(r);
  dichotomy_csv(a, r, family.size());
  a.plot_title = cfg.name;
  const std::string got = classification_name(r.classification);
  if (cfg.expect_classification) {
    a.verdict_ok = got == *cfg.expect_classification;
    a.verdict = a.verdict_ok ? got : got + " (expected " +
                                         *cfg.expect_classification + ")";
  } else {
    a.verdict_ok = true;
    a.verdict = got;
  }
  return a;
}

Artifacts run_zn0(const ParsedConfig& cfg, ChannelContext& ctx,
                  const json& params) {
  check_keys(params, "params", {"T", "S", "n0", "N"}, {"Z"});
  SuperOperator T = ctx.named(get_string(params.at("T"), "params.T"),
                              "params.T");
  SuperOperator S = ctx.named(get_string(params.at("S"), "params.S"),
                              "params.S");
  SuperOperator Z =
      params.contains("Z")
          ? ctx.named(get_string(params.at("Z"), "params.Z"), "params.Z")
          : SuperOperator::identity(T.domain());
  const std::uint64_t n0 = get_unsigned(params.at("n0"), "params.n0");
  const std::uint64_t N = get_unsigned(params.at("N"), "params.N");
  DominancePropagationReport r =
      zn0_experiment(Z, T, S, n0, N, 16, cfg.seed);

  Artifacts a;
  a.report = json{{"n0", r.n_start},
                  {"N", r.n_end},
                  {"worst_margin", r.worst_margin},
                  {"all_below_one", r.all_below_one},
                  {"norms", r.norms}};
  Csv csv({"n", "norm", "margin"});
  for (size_t i = 0; i < r.norms.size(); ++i) {
    const std::uint64_t n = r.n_start + i;
    csv.row({std::to_string(n), fmt(r.norms[i]), fmt(1.0 - r.norms[i])});
    a.plot.emplace_back(double(n), log10_clamped(r.norms[i]));
  }
  a.csv.emplace_back("", csv.str());
  a.plot_title = cfg.name;
  a.verdict_ok = r.all_below_one;
  a.verdict = r.all_below_one ? "all norms below one" : "norm reached one";
  return a;
}

json construction_report(const ConstructionTrace& t) {
  return json{{"residual_q_identity", t.residual_q_identity},
              {"residual_v_identity", t.residual_v_identity},
              {"q_levels", t.Q.size()},
              {"v_depth", t.V.size()},
              {"ell_v", t.ell_v}};
}

json multiparam_report(const MultiParamReport& r) {
  json verification = json::array();
  for (const auto& [n, est] : r.verification) {
    json e = estimate_to_json(est);
    e["n"] = index_to_json(n);
    verification.push_back(e);
  }
  return json{{"hyp_norm_mk", r.hyp_norm_mk},
              {"hyp_norm_m", r.hyp_norm_m},
              {"ell_eps", r.ell_eps},
              {"gamma_at_ell", r.gamma_at_ell},
              {"zq_margin", r.zq_margin},
              {"zq_margin_exact", r.zq_margin_exact},
              {"zq_norm_dual", r.zq_norm_dual},
              {"zq_norm_direct", r.zq_norm_direct},
              {"d_eps", big_to_json(r.d_eps)},
              {"d_eps_direct", r.d_eps_direct},
              {"zq_power_norm", r.zq_power_norm},
              {"M", big_to_json(r.M)},
              {"n0", index_to_json(r.n0)},
              {"conclusion_holds", r.conclusion_holds},
              {"construction", construction_report(r.trace)},
              {"verification", verification}};
}

void verification_csv(Artifacts& a, const MultiParamReport& r, int d) {
  std::vector<std::string> header;
  for (int i = 1; i <= d; ++i) header.push_back("n_" + std::to_string(i));
  header.insert(header.end(), {"lower", "upper", "exact"});
  Csv csv(header);
  for (const auto& [n, est] : r.verification) {
    std::vector<std::string> cells;
    for (int i = 0; i < d; ++i) cells.push_back(n[i].str());
    cells.push_back(fmt(est.lower));
    cells.push_back(fmt(est.upper));
    cells.push_back(est.exact ? "1" : "0");
    csv.row(cells);
  }
  a.csv.emplace_back("", csv.str());
}

Artifacts run_theorem12(const ParsedConfig& cfg, ChannelContext& ctx,
                        const json& params) {
  check_keys(params, "params", {"family", "S", "m", "k"}, {"Z"});
  const json& fam_names = params.at("family");
  if (!fam_names.is_array() || fam_names.empty())
    schema_fail("params.family", "expected a nonempty array");
  std::vector<SuperOperator> members;
  for (size_t i = 0; i < fam_names.size(); ++i)
    members.push_back(ctx.named(
        get_string(fam_names[i], "params.family"), "params.family"));
  CommutingFamily family(std::move(members));
  SuperOperator S = ctx.named(get_string(params.at("S"), "params.S"),
                              "params.S");
  SuperOperator Z =
      params.contains("Z")
          ? ctx.named(get_string(params.at("Z"), "params.Z"), "params.Z")
          : SuperOperator::identity(family.shape());
  auto parse_index = [&](const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != fam_names.size())
      schema_fail(path, "expected one entry per family member");
    std::vector<BigInt> e;
    for (const auto& v : j) e.emplace_back(get_unsigned(v, path));
    return MultiIndex(std::move(e));
  };
  MultiIndex m = parse_index(params.at("m"), "params.m");
  MultiIndex k = parse_index(params.at("k"), "params.k");

  MultiParamOptions opts;
  opts.eps = cfg.eps;
  opts.seed = cfg.seed;
  opts.norms = strategy_for(cfg);
  MultiParamReport r = theorem12_experiment(Z, family, S, m, k, opts);

  Artifacts a;
  a.report = multiparam_report(r);
  verification_csv(a, r, family.size());
  a.verdict_ok = r.conclusion_holds;
  a.verdict = r.conclusion_holds ? "conclusion verified at n0"
                                 : "conclusion failed";
  return a;
}

Artifacts run_corollary14(const ParsedConfig& cfg, ChannelContext& ctx,
                          const json& params) {
  check_keys(params, "params", {"T", "S_map", "S_dom", "m0", "k"},
             {"table_max"});
  SuperOperator T = ctx.named(get_string(params.at("T"), "params.T"),
                              "params.T");
  SuperOperator Smap = ctx.named(
      get_string(params.at("S_map"), "params.S_map"), "params.S_map");
  SuperOperator Sdom = ctx.named(
      get_string(params.at("S_dom"), "params.S_dom"), "params.S_dom");
  const std::uint64_t m0 = get_unsigned(params.at("m0"), "params.m0");
  const std::uint64_t k = get_unsigned(params.at("k"), "params.k");
  const std::uint64_t table_max =
      params.contains("table_max")
          ? get_unsigned(params.at("table_max"), "params.table_max")
          : 12;

  MultiParamOptions opts;
  opts.eps = cfg.eps;
  opts.seed = cfg.seed;
  opts.norms = strategy_for(cfg);
  TwoParamReport r = corollary14_experiment(T, Smap, Sdom, m0, k, table_max,
                                            opts);

  Artifacts a;
  a.report["inner"] = multiparam_report(r.inner);
  json table = json::array();
  Csv csv({"n", "m", "lower", "upper", "exact"});
  for (const auto& s : r.table) {
    json e = estimate_to_json(s.norm);
    e["n"] = s.n;
    e["m"] = s.m;
    table.push_back(e);
    csv.row({std::to_string(s.n), std::to_string(s.m), fmt(s.norm.lower),
             fmt(s.norm.upper), s.norm.exact ? "1" : "0"});
  }
  a.report["table"] = table;
  a.csv.emplace_back("", csv.str());
  a.verdict_ok = r.inner.conclusion_holds;
  a.verdict = a.verdict_ok ? "two-parameter decay verified"
                           : "conclusion failed";
  return a;
}

Artifacts run_zaharopol(const ParsedConfig& cfg, ChannelContext& ctx,
                        const json& params) {
  check_keys(params, "params", {"T", "m"}, {});
  SuperOperator T = ctx.named(get_string(params.at("T"), "params.T"),
                              "params.T");
  const std::uint64_t m = get_unsigned(params.at("m"), "params.m");
  ZaharopolReport r =
      zaharopol_check(T, m, cfg.n_max, cfg.eps, strategy_for(cfg));

  Artifacts a;
  a.report = json{{"condition_i_value", r.condition_i_value},
                  {"condition_ii_value", r.condition_ii_value},
                  {"condition_i_holds", r.condition_i_holds},
                  {"condition_ii_holds", r.condition_ii_holds},
                  {"implication_consistent", r.implication_consistent}};
  if (r.decay) {
    a.report["decay"] = dichotomy_report(*r.decay);
    dichotomy_csv(a, *r.decay, 1);
    a.plot_title = cfg.name;
  } else {
    Csv csv({"n", "lower", "upper", "exact"});
    a.csv.emplace_back("", csv.str());
  }
  bool decayed = !r.decay || r.decay->classification ==
                                 Classification::ConvergesToZero;
  a.verdict_ok = r.implication_consistent && decayed;
  std::ostringstream v;
  v << "meet condition " << (r.condition_ii_holds ? "holds" : "fails");
  if (r.decay)
    v << ", " << classification_name(r.decay->classification);
  a.verdict = v.str();
  return a;
}

SectionOperator parse_section_operator(const json& spec,
                                       const BundleAlgebra& bundle,
                                       const std::string& path) {
  check_keys(spec, path, {"fibers"}, {});
  const json& fibers = spec.at("fibers");
  if (!fibers.is_object()) schema_fail(path + ".fibers", "expected an object");
  for (const auto& [label, value] : fibers.items()) {
    (void)value;
    if (std::find(bundle.base().atoms.begin(), bundle.base().atoms.end(),
                  label) == bundle.base().atoms.end())
      schema_fail(path + ".fibers." + label, "unknown atom label");
  }
  std::vector<SuperOperator> maps;
  for (int i = 0; i < bundle.atom_count(); ++i) {
    const std::string& label = bundle.base().atoms[i];
    if (!fibers.contains(label))
      schema_fail(path + ".fibers." + label, "missing");
    ChannelContext fiber_ctx(nullptr, bundle.fiber(i));
    maps.push_back(
        fiber_ctx.build(fibers.at(label), path + ".fibers." + label));
  }
  return SectionOperator(bundle, std::move(maps));
}

Artifacts run_bundle_order_limit(const ParsedConfig& cfg,
                                 const BundleAlgebra& bundle,
                                 const json& params) {
  check_keys(params, "params", {"T", "S", "m", "k"}, {});
  SectionOperator T = parse_section_operator(params.at("T"), bundle,
                                             "params.T");
  SectionOperator S = parse_section_operator(params.at("S"), bundle,
                                             "params.S");
  const std::uint64_t m = get_unsigned(params.at("m"), "params.m");
  const std::uint64_t k = get_unsigned(params.at("k"), "params.k");

  // disintegration round trip of the assembled global map
  SuperOperator global = assemble(T);
  SectionOperator back = disintegrate(bundle, global);
  bool roundtrip = assemble(back).rep() == global.rep();
  for (int i = 0; i < bundle.atom_count(); ++i)
    roundtrip = roundtrip && back.at(i).rep() == T.at(i).rep();

  FiberNorms center = operator_center_norm(T, strategy_for(cfg));
  OrderLimitReport r = order_limit_check(T, S, m, k, cfg.eps, cfg.n_max, 16,
                                         cfg.seed, strategy_for(cfg));

  Artifacts a;
  json atoms = json::array();
  Csv csv({"atom", "n", "lower", "upper", "exact"});
  for (int i = 0; i < bundle.atom_count(); ++i) {
    const std::string& label = bundle.base().atoms[i];
    json atom{{"label", label},
              {"mass", bundle.base().masses[i]},
              {"dual_unital", static_cast<bool>(r.fiber_dual_unital[i])},
              {"hyp_norm_mk", r.hyp_norm_mk[i]},
              {"hyp_norm_m", r.hyp_norm_m[i]},
              {"center_norm_lower", center.lower.values[i]},
              {"center_norm_upper", center.upper.values[i]}};
    if (r.fiber_n_zero[i]) atom["n_zero"] = *r.fiber_n_zero[i];
    atoms.push_back(atom);
    for (std::uint64_t n = 1; n <= r.n_max; ++n) {
      const NormEstimate& est = r.norms[i][n - 1];
      csv.row({label, std::to_string(n), fmt(est.lower), fmt(est.upper),
               est.exact ? "1" : "0"});
      if (i == 0) a.plot.emplace_back(double(n), log10_clamped(est.upper));
    }
  }
  a.csv.emplace_back("", csv.str());
  a.plot_title = cfg.name;
  a.report = json{{"roundtrip_exact", roundtrip},
                  {"global_unit_fixed", r.global_unit_fixed},
                  {"converges", r.converges},
                  {"m", r.m},
                  {"k", r.k},
                  {"atoms", atoms}};
  a.verdict_ok = r.converges && roundtrip;
  a.verdict = a.verdict_ok ? "componentwise order limit reached"
                           : "order limit failed";
  return a;
}

Artifacts run_gns(const ParsedConfig& cfg, const AlgebraShape& shape,
                  const json& params) {
  (void)cfg;
  check_keys(params, "params", {"phi"}, {});
  const json& pj = params.at("phi");
  if (!pj.is_array() || static_cast<int>(pj.size()) != shape.block_count())
    schema_fail("params.phi", "expected one weight per block");
  RealVector phi(shape.block_count());
  for (int i = 0; i < shape.block_count(); ++i)
    phi[i] = get_number(pj[i], "params.phi");

  GnsFiber f = gns(shape, phi);

  // predicted kernel: the basis elements of blocks where phi vanishes
  int predicted_kernel = 0;
  for (int k = 0; k < shape.block_count(); ++k)
    if (phi[k] == 0.0)
      predicted_kernel += shape.block(k).dim * shape.block(k).dim;

  double mu_residual = 0.0;
  Csv csv({"basis_index", "mu", "expected"});
  int idx = 0;
  for (int k = 0; k < shape.block_count(); ++k) {
    const int n = shape.block(k).dim;
    for (int j = 0; j < n * n; ++j, ++idx) {
      std::vector<Matrix> blocks;
      for (int b = 0; b < shape.block_count(); ++b)
        blocks.push_back(b == k ? shape.basis_matrix(k, j)
                                : Matrix::Zero(shape.block(b).dim,
                                               shape.block(b).dim));
      const Complex mu = f.mu_of(blocks);
      const double expected = phi[k] * shape.basis_matrix(k, j).trace().real();
      mu_residual = std::max(mu_residual, std::abs(mu - expected));
      csv.row({std::to_string(idx), fmt(mu.real()), fmt(expected)});
    }
  }
  Artifacts a;
  a.csv.emplace_back("", csv.str());
  a.report = json{{"source_dim", f.source_dim},
                  {"kernel_dim", f.kernel_dim},
                  {"quotient_dim", f.quotient_dim},
                  {"predicted_kernel_dim", predicted_kernel},
                  {"mu_residual", mu_residual}};
  a.verdict_ok =
      f.kernel_dim == predicted_kernel && mu_residual <= 1e-10;
  a.verdict = a.verdict_ok ? "trace recovered on the quotient"
                           : "gns construction failed";
  return a;
}

ParsedConfig parse_config(const json& j) {
  check_keys(j, "config", {"name", "experiment"},
             {"seed", "algebra", "bundle", "channels", "params", "schedule",
              "eps", "restarts", "expect"});
  ParsedConfig cfg;
  cfg.raw = j;
  cfg.name = get_string(j.at("name"), "name");
  if (cfg.name.empty() ||
      cfg.name.find_first_not_of(
          "abcdefghijklmnopqrstuvwxyz0123456789-") != std::string::npos)
    schema_fail("name", "must be a kebab-case identifier");
  cfg.kind = get_string(j.at("experiment"), "experiment");
  if (j.contains("seed")) cfg.seed = get_unsigned(j.at("seed"), "seed");
  if (j.contains("eps")) {
    cfg.eps = get_number(j.at("eps"), "eps");
    if (!(cfg.eps > 0.0)) schema_fail("eps", "must be positive");
  }
  if (j.contains("restarts")) {
    cfg.restarts = static_cast<int>(get_unsigned(j.at("restarts"), "restarts"));
    if (cfg.restarts < 1) schema_fail("restarts", "must be at least 1");
  }
  if (j.contains("schedule")) {
    check_keys(j.at("schedule"), "schedule", {}, {"n_max", "points"});
    if (j.at("schedule").contains("n_max"))
      cfg.n_max = get_unsigned(j.at("schedule").at("n_max"),
                               "schedule.n_max");
    if (cfg.n_max < 1) schema_fail("schedule.n_max", "must be at least 1");
    if (j.at("schedule").contains("points")) {
      const json& pts = j.at("schedule").at("points");
      if (!pts.is_array()) schema_fail("schedule.points", "expected an array");
      for (const auto& p : pts) {
        if (!p.is_array()) schema_fail("schedule.points", "expected arrays");
        std::vector<std::uint64_t> entry;
        for (const auto& v : p)
          entry.push_back(get_unsigned(v, "schedule.points"));
        cfg.extra_points.push_back(std::move(entry));
      }
    }
  }
  if (j.contains("expect")) {
    check_keys(j.at("expect"), "expect", {}, {"classification"});
    if (j.at("expect").contains("classification"))
      cfg.expect_classification = get_string(
          j.at("expect").at("classification"), "expect.classification");
  }
  return cfg;
}

}  // namespace

RunOutcome run_config_string(const std::string& json_text,
                             const RunOptions& opts) {
  RunOutcome outcome;
  const auto t0 = std::chrono::steady_clock::now();
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    // recover the line from the byte offset for the diagnostic
    size_t line = 1;
    for (size_t i = 0; i < e.byte && i < json_text.size(); ++i)
      if (json_text[i] == '\n') ++line;
    outcome.exit_code = 3;
    outcome.verdict = "schema violation";
    outcome.message =
        "JSON parse error at line " + std::to_string(line) + ": " + e.what();
    return outcome;
  }

  ParsedConfig cfg;
  Artifacts artifacts;
  try {
    cfg = parse_config(j);
    if (opts.seed_override) cfg.seed = *opts.seed_override;

    const std::set<std::string> kinds = {
        "norm",        "dichotomy",   "zn0",
        "theorem12",   "corollary14", "zaharopol",
        "bundle-order-limit", "gns"};
    if (!kinds.count(cfg.kind))
      schema_fail("experiment", "unknown experiment kind '" + cfg.kind + "'");

    const json params = j.contains("params") ? j.at("params")
                                             : json::object();
    if (cfg.kind == "bundle-order-limit") {
      if (!j.contains("bundle")) schema_fail("bundle", "missing");
      BundleAlgebra bundle = parse_bundle(j.at("bundle"), "bundle");
      artifacts = run_bundle_order_limit(cfg, bundle, params);
    } else {
      if (!j.contains("algebra")) schema_fail("algebra", "missing");
      AlgebraShape shape = parse_algebra(j.at("algebra"), "algebra");
      const json* channels =
          j.contains("channels") ? &j.at("channels") : nullptr;
      if (channels && !channels->is_object())
        schema_fail("channels", "expected an object");
      ChannelContext ctx(channels, shape);
      if (cfg.kind == "norm")
        artifacts = run_norm(cfg, ctx, params);
      else if (cfg.kind == "dichotomy")
        artifacts = run_dichotomy(cfg, ctx, params);
      else if (cfg.kind == "zn0")
        artifacts = run_zn0(cfg, ctx, params);
      else if (cfg.kind == "theorem12")
        artifacts = run_theorem12(cfg, ctx, params);
      else if (cfg.kind == "corollary14")
        artifacts = run_corollary14(cfg, ctx, params);
      else if (cfg.kind == "zaharopol")
        artifacts = run_zaharopol(cfg, ctx, params);
      else if (cfg.kind == "gns")
        artifacts = run_gns(cfg, shape, params);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaViolation) {
      outcome.exit_code = 3;
      outcome.verdict = "schema violation";
    } else if (e.code() == ErrorCode::PremiseViolated) {
      outcome.exit_code = 2;
      outcome.verdict = "premise violated";
    } else {
      outcome.exit_code = 1;
      outcome.verdict = "error";
    }
    outcome.message = e.what();
    if (outcome.exit_code != 3 && !cfg.name.empty()) {
      json doc{{"tool_version", version_string()},
               {"name", cfg.name},
               {"experiment", cfg.kind},
               {"seed", cfg.seed},
               {"verdict", outcome.verdict},
               {"message", outcome.message},
               {"config", j}};
      outcome.result_json = doc.dump(2) + "\n";
      if (opts.write_files) {
        fs::create_directories(opts.out_dir);
        fs::path p = fs::path(opts.out_dir) / (cfg.name + ".json");
        atomic_write(p, outcome.result_json);
        outcome.files_written.push_back(p.string());
      }
    }
    return outcome;
  } catch (const std::exception& e) {
    outcome.exit_code = 1;
    outcome.verdict = "error";
    outcome.message = e.what();
    return outcome;
  }

  const auto t1 = std::chrono::steady_clock::now();
  const double ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();

  json doc{{"tool_version", version_string()},
           {"name", cfg.name},
           {"experiment", cfg.kind},
           {"seed", cfg.seed},
           {"eps", cfg.eps},
           {"wall_clock_ms", ms},
           {"verdict", artifacts.verdict},
           {"verdict_ok", artifacts.verdict_ok},
           {"report", artifacts.report},
           {"config", j}};

  if (opts.write_files) {
    fs::create_directories(opts.out_dir);
    for (const auto& [suffix, content] : artifacts.csv) {
      fs::path p = fs::path(opts.out_dir) / (cfg.name + suffix + ".csv");
      atomic_write(p, content);
      outcome.files_written.push_back(p.string());
    }
    if (opts.plot && !artifacts.plot.empty()) {
      fs::path p = fs::path(opts.out_dir) / (cfg.name + ".svg");
      atomic_write(p, svg_plot(artifacts.plot, artifacts.plot_title));
      outcome.files_written.push_back(p.string());
    }
    json files = json::array();
    for (const auto& f : outcome.files_written) files.push_back(f);
    doc["files"] = files;
    outcome.result_json = doc.dump(2) + "\n";
    fs::path p = fs::path(opts.out_dir) / (cfg.name + ".json");
    atomic_write(p, outcome.result_json);
    outcome.files_written.push_back(p.string());
  } else {
    outcome.result_json = doc.dump(2) + "\n";
  }

  outcome.exit_code = artifacts.verdict_ok ? 0 : 2;
  outcome.verdict = artifacts.verdict;
  return outcome;
}

RunOutcome run_config_file(const std::string& path, const RunOptions& opts) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) {
    RunOutcome outcome;
    outcome.exit_code = 1;
    outcome.verdict = "error";
    outcome.message = "cannot read config file: " + path;
    return outcome;
  }
  std::ostringstream buf;
  buf << f.rdbuf();
  return run_config_string(buf.str(), opts);
}

}  // namespace zerotwo
