#ifndef ZEROTWO_ERRORS_HPP
#define ZEROTWO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zerotwo {

enum class ErrorCode {
  InvalidInput = 1,
  NumericalFailure,
  CommutationViolated,
  IdentityResidualExceeded,
  PremiseViolated,
  SearchExhausted,
  TracePreservationViolated,
  CenterCommutationViolated,
  InvalidTrace,
  SchemaViolation,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace zerotwo

#endif
