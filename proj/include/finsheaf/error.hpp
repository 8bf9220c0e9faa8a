#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace finsheaf {

enum class ErrorCode {
  // topology
  MissingEmptyOpen,
  MissingWholeSpace,
  NotClosedUnderUnion,
  NotClosedUnderIntersection,
  UnknownPoint,
  DuplicatePoint,
  InvalidPointName,
  NotContinuous,
  NotABasis,
  NotOpen,
  TooLarge,
  // dirlimit
  NotDirected,
  NotAPreorder,
  MissingMap,
  IdentityViolated,
  CompositionViolated,
  NotACocone,
  // presheaf
  MissingSectionSet,
  MissingRestriction,
  PathDependent,
  UnknownSection,
  DuplicateElement,
  SquareFails,
  BaseMismatch,
  PointNotInOpen,
  NotASubset,
  // etale
  NotSurjective,
  NotLocalHomeo,
  EmptyFiber,
  ConditionIFails,
  ConditionIIFails,
  ConditionIIIFails,
  TriangleFails,
  // functors
  NotComplete,
  TheoremViolation,
  // io / harness
  SyntaxError,
  InvalidFormat,
  GenerationExhausted,
  /// A harness check whose premise does not hold for the instance.
  Inapplicable,
};

std::string_view to_string(ErrorCode code);

/// Every validation failure in the library. The message carries the witness
/// (offending open, point, element ...) in the canonical naming scheme.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& witness)
      : std::runtime_error(std::string(to_string(code)) + ": " + witness),
        code_(code),
        witness_(witness) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  ErrorCode code_;
  std::string witness_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& witness) {
  throw Error(code, witness);
}

}  // namespace finsheaf
