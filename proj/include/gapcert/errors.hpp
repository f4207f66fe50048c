#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gapcert {

enum class ErrorCode {
  NotSymmetric,
  NotFinite,
  NotPSD,
  NotDefinite,
  Singular,
  DimensionMismatch,
  BNotInvertible,
  UnboundedRelativeBound,
  B22Singular,
  BothSemidefiniteSingular,
  NegativeDiscriminant,
  DegenerateDirection,
  NABViolated,
  RankDeficient,
  EtaOutOfRange,
  RootCountMismatch,
  OutOfRegime,
  NoConvergence,
  Parse,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  bool is_parse_error() const noexcept { return code_ == ErrorCode::Parse; }

 private:
  ErrorCode code_;
};

}  // namespace gapcert
