#include "zerotwo.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "zerotwo/experiment.hpp"
#include "zerotwo/laws.hpp"
#include "zerotwo/version.hpp"

struct zt_algebra {
  zerotwo::AlgebraShape shape;
};
struct zt_element {
  zerotwo::HermitianElement value;
};
struct zt_superop {
  zerotwo::SuperOperator op;
};

namespace {

thread_local std::string g_last_error;

zt_status map_code(zerotwo::ErrorCode code) {
  using zerotwo::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidInput:
      return ZT_INVALID_INPUT;
    case ErrorCode::NumericalFailure:
      return ZT_NUMERICAL_FAILURE;
    case ErrorCode::CommutationViolated:
      return ZT_COMMUTATION_VIOLATED;
    case ErrorCode::IdentityResidualExceeded:
      return ZT_RESIDUAL_EXCEEDED;
    case ErrorCode::PremiseViolated:
      return ZT_PREMISE_VIOLATED;
    case ErrorCode::SearchExhausted:
      return ZT_SEARCH_EXHAUSTED;
    case ErrorCode::TracePreservationViolated:
      return ZT_TRACE_PRESERVATION_VIOLATED;
    case ErrorCode::CenterCommutationViolated:
      return ZT_CENTER_COMMUTATION_VIOLATED;
    case ErrorCode::InvalidTrace:
      return ZT_INVALID_TRACE;
    case ErrorCode::SchemaViolation:
      return ZT_SCHEMA_VIOLATION;
    case ErrorCode::IoError:
      return ZT_IO_ERROR;
  }
  return ZT_ERROR;
}

template <typename F>
zt_status guarded(F&& f) {
  try {
    f();
    return ZT_OK;
  } catch (const zerotwo::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ZT_ERROR;
  }
}

template <typename T, typename F>
T* guarded_new(F&& f) {
  try {
    return f();
  } catch (const zerotwo::Error& e) {
    g_last_error = e.what();
    return nullptr;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

zt_status require_args(bool ok) {
  if (!ok) {
    g_last_error = "null argument";
    return ZT_INVALID_INPUT;
  }
  return ZT_OK;
}

}  // namespace

extern "C" {

const char* zt_version(void) { return zerotwo::version_string(); }

const char* zt_last_error(void) { return g_last_error.c_str(); }

zt_algebra* zt_algebra_create(const int32_t* dims, const double* weights,
                              int32_t blocks) {
  if (!dims || blocks < 1) {
    g_last_error = "need at least one block dimension";
    return nullptr;
  }
  return guarded_new<zt_algebra>([&] {
    std::vector<zerotwo::BlockSpec> specs;
    for (int32_t i = 0; i < blocks; ++i)
      specs.push_back({dims[i], weights ? weights[i] : 1.0});
    return new zt_algebra{zerotwo::AlgebraShape(std::move(specs))};
  });
}

void zt_algebra_destroy(zt_algebra* a) { delete a; }

int32_t zt_algebra_herm_dim(const zt_algebra* a) {
  return a ? a->shape.herm_dim() : -1;
}

zt_element* zt_element_create(const zt_algebra* a, const double* interleaved,
                              size_t len) {
  if (!a || !interleaved) {
    g_last_error = "null argument";
    return nullptr;
  }
  return guarded_new<zt_element>([&]() -> zt_element* {
    size_t expected = 0;
    for (int k = 0; k < a->shape.block_count(); ++k) {
      const size_t n = static_cast<size_t>(a->shape.block(k).dim);
      expected += 2 * n * n;
    }
    zerotwo::require(len == expected, zerotwo::ErrorCode::InvalidInput,
                     "element data length mismatch");
    std::vector<zerotwo::Matrix> mats;
    size_t pos = 0;
    for (int k = 0; k < a->shape.block_count(); ++k) {
      const int n = a->shape.block(k).dim;
      zerotwo::Matrix m(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          m(r, c) = zerotwo::Complex(interleaved[pos], interleaved[pos + 1]);
          pos += 2;
        }
      mats.push_back(std::move(m));
    }
    return new zt_element{
        zerotwo::HermitianElement(a->shape, std::move(mats))};
  });
}

zt_element* zt_element_identity(const zt_algebra* a) {
  if (!a) {
    g_last_error = "null algebra";
    return nullptr;
  }
  return guarded_new<zt_element>([&] {
    return new zt_element{zerotwo::HermitianElement::identity(a->shape)};
  });
}

void zt_element_destroy(zt_element* x) { delete x; }

zt_status zt_element_trace(const zt_element* x, double* out) {
  if (zt_status s = require_args(x && out)) return s;
  return guarded([&] { *out = zerotwo::trace(x->value); });
}

zt_status zt_element_trace_norm(const zt_element* x, double* out) {
  if (zt_status s = require_args(x && out)) return s;
  return guarded([&] { *out = zerotwo::trace_norm(x->value); });
}

zt_status zt_element_sup_norm(const zt_element* x, double* out) {
  if (zt_status s = require_args(x && out)) return s;
  return guarded([&] { *out = zerotwo::sup_norm(x->value); });
}

zt_superop* zt_superop_identity(const zt_algebra* a) {
  if (!a) {
    g_last_error = "null algebra";
    return nullptr;
  }
  return guarded_new<zt_superop>([&] {
    return new zt_superop{zerotwo::SuperOperator::identity(a->shape)};
  });
}

zt_superop* zt_superop_depolarizing(const zt_algebra* a, double p) {
  if (!a) {
    g_last_error = "null algebra";
    return nullptr;
  }
  return guarded_new<zt_superop>([&] {
    return new zt_superop{zerotwo::make_depolarizing(a->shape, p)};
  });
}

zt_superop* zt_superop_stochastic(const zt_algebra* a,
                                  const double* row_major) {
  if (!a || !row_major) {
    g_last_error = "null argument";
    return nullptr;
  }
  return guarded_new<zt_superop>([&] {
    const int n = a->shape.block_count();
    zerotwo::RealMatrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = row_major[r * n + c];
    return new zt_superop{zerotwo::make_stochastic(a->shape, m)};
  });
}

zt_superop* zt_superop_scale(const zt_superop* t, double s) {
  if (!t) {
    g_last_error = "null superoperator";
    return nullptr;
  }
  return guarded_new<zt_superop>(
      [&] { return new zt_superop{t->op.scale(s)}; });
}

zt_superop* zt_superop_compose(const zt_superop* outer,
                               const zt_superop* inner) {
  if (!outer || !inner) {
    g_last_error = "null superoperator";
    return nullptr;
  }
  return guarded_new<zt_superop>(
      [&] { return new zt_superop{outer->op.compose(inner->op)}; });
}

zt_superop* zt_superop_power(const zt_superop* t, uint64_t n) {
  if (!t) {
    g_last_error = "null superoperator";
    return nullptr;
  }
  return guarded_new<zt_superop>(
      [&] { return new zt_superop{t->op.power(n)}; });
}

zt_superop* zt_superop_adjoint(const zt_superop* t) {
  if (!t) {
    g_last_error = "null superoperator";
    return nullptr;
  }
  return guarded_new<zt_superop>(
      [&] { return new zt_superop{t->op.adjoint()}; });
}

zt_superop* zt_superop_subtract(const zt_superop* a, const zt_superop* b) {
  if (!a || !b) {
    g_last_error = "null superoperator";
    return nullptr;
  }
  return guarded_new<zt_superop>(
      [&] { return new zt_superop{a->op - b->op}; });
}

void zt_superop_destroy(zt_superop* t) { delete t; }

zt_status zt_superop_apply(const zt_superop* t, const zt_element* x,
                           zt_element** out) {
  if (zt_status s = require_args(t && x && out)) return s;
  return guarded([&] { *out = new zt_element{t->op.apply(x->value)}; });
}

zt_status zt_superop_is_trace_preserving(const zt_superop* t, int32_t* out) {
  if (zt_status s = require_args(t && out)) return s;
  return guarded([&] { *out = t->op.is_trace_preserving() ? 1 : 0; });
}

zt_status zt_superop_is_unital_dual(const zt_superop* t, int32_t* out) {
  if (zt_status s = require_args(t && out)) return s;
  return guarded([&] { *out = t->op.is_unital_dual() ? 1 : 0; });
}

zt_status zt_superop_norm_positive(const zt_superop* t,
                                   int32_t assume_positive, double* out) {
  if (zt_status s = require_args(t && out)) return s;
  return guarded(
      [&] { *out = zerotwo::norm_positive(t->op, assume_positive != 0); });
}

zt_status zt_superop_norm_1to1(const zt_superop* t, uint64_t seed,
                               int32_t restarts, double* lower, double* upper,
                               int32_t* exact) {
  if (zt_status s = require_args(t && lower && upper)) return s;
  return guarded([&] {
    zerotwo::NormStrategy strat;
    strat.seed = seed;
    if (restarts > 0) strat.restarts = restarts;
    zerotwo::NormEstimate est = zerotwo::norm_1to1(t->op, strat);
    *lower = est.lower;
    *upper = est.upper;
    if (exact) *exact = est.exact ? 1 : 0;
  });
}

zt_status zt_superop_dominates(const zt_superop* t, const zt_superop* s,
                               int32_t budget, uint64_t seed,
                               int32_t* dominated) {
  if (zt_status st = require_args(t && s && dominated)) return st;
  return guarded([&] {
    *dominated =
        zerotwo::dominance_check(t->op, s->op, budget, seed).dominated ? 1
                                                                       : 0;
  });
}

zt_status zt_superop_write_matrix_csv(const zt_superop* t, const char* path) {
  if (zt_status s = require_args(t && path)) return s;
  return guarded([&] {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    zerotwo::require(f.good(), zerotwo::ErrorCode::IoError,
                     std::string("cannot open ") + path);
    const zerotwo::RealMatrix& m = t->op.rep();
    char buf[64];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
        if (c) f << ",";
        f << buf;
      }
      f << "\n";
    }
    zerotwo::require(f.good(), zerotwo::ErrorCode::IoError,
                     std::string("write failed: ") + path);
  });
}

namespace {

zt_status run_common(const zerotwo::RunOutcome& outcome, int32_t* exit_code,
                     char** result_json) {
  if (exit_code) *exit_code = outcome.exit_code;
  if (result_json) {
    *result_json = nullptr;
    if (!outcome.result_json.empty()) {
      *result_json =
          static_cast<char*>(std::malloc(outcome.result_json.size() + 1));
      if (*result_json)
        std::memcpy(*result_json, outcome.result_json.c_str(),
                    outcome.result_json.size() + 1);
    }
  }
  if (outcome.exit_code == 0) return ZT_OK;
  g_last_error = outcome.message.empty() ? outcome.verdict : outcome.message;
  switch (outcome.exit_code) {
    case 2:
      return ZT_PREMISE_VIOLATED;
    case 3:
      return ZT_SCHEMA_VIOLATION;
    default:
      return ZT_ERROR;
  }
}

zerotwo::RunOptions make_options(const char* out_dir, int64_t seed_override,
                                 int32_t plot) {
  zerotwo::RunOptions opts;
  if (out_dir) opts.out_dir = out_dir;
  if (seed_override >= 0)
    opts.seed_override = static_cast<std::uint64_t>(seed_override);
  opts.plot = plot != 0;
  return opts;
}

}  // namespace

zt_status zt_run_config_file(const char* config_path, const char* out_dir,
                             int64_t seed_override, int32_t plot,
                             int32_t* exit_code, char** result_json) {
  if (!config_path) {
    g_last_error = "null config path";
    if (exit_code) *exit_code = 1;
    return ZT_INVALID_INPUT;
  }
  try {
    zerotwo::RunOutcome outcome = zerotwo::run_config_file(
        config_path, make_options(out_dir, seed_override, plot));
    return run_common(outcome, exit_code, result_json);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    if (exit_code) *exit_code = 1;
    return ZT_ERROR;
  }
}

zt_status zt_run_config_string(const char* config_json, const char* out_dir,
                               int64_t seed_override, int32_t plot,
                               int32_t* exit_code, char** result_json) {
  if (!config_json) {
    g_last_error = "null config";
    if (exit_code) *exit_code = 1;
    return ZT_INVALID_INPUT;
  }
  try {
    zerotwo::RunOutcome outcome = zerotwo::run_config_string(
        config_json, make_options(out_dir, seed_override, plot));
    return run_common(outcome, exit_code, result_json);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    if (exit_code) *exit_code = 1;
    return ZT_ERROR;
  }
}

void zt_string_free(char* s) { std::free(s); }

int32_t zt_example_count(void) {
  return static_cast<int32_t>(zerotwo::example_configs().size());
}

const char* zt_example_name(int32_t index) {
  const auto& ex = zerotwo::example_configs();
  if (index < 0 || index >= static_cast<int32_t>(ex.size())) return nullptr;
  return ex[static_cast<size_t>(index)].name;
}

const char* zt_example_config(int32_t index) {
  const auto& ex = zerotwo::example_configs();
  if (index < 0 || index >= static_cast<int32_t>(ex.size())) return nullptr;
  return ex[static_cast<size_t>(index)].json;
}

}  // extern "C"
