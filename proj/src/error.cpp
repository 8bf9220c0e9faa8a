#include "finsheaf/error.hpp"

namespace finsheaf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingEmptyOpen:
      return "MissingEmptyOpen";
    case ErrorCode::MissingWholeSpace:
      return "MissingWholeSpace";
    case ErrorCode::NotClosedUnderUnion:
      return "NotClosedUnderUnion";
    case ErrorCode::NotClosedUnderIntersection:
      return "NotClosedUnderIntersection";
    case ErrorCode::UnknownPoint:
      return "UnknownPoint";
    case ErrorCode::DuplicatePoint:
      return "DuplicatePoint";
    case ErrorCode::InvalidPointName:
      return "InvalidPointName";
    case ErrorCode::NotContinuous:
      return "NotContinuous";
    case ErrorCode::NotABasis:
      return "NotABasis";
    case ErrorCode::NotOpen:
      return "NotOpen";
    case ErrorCode::TooLarge:
      return "TooLarge";
    case ErrorCode::NotDirected:
      return "NotDirected";
    case ErrorCode::NotAPreorder:
      return "NotAPreorder";
    case ErrorCode::MissingMap:
      return "MissingMap";
    case ErrorCode::IdentityViolated:
      return "IdentityViolated";
    case ErrorCode::CompositionViolated:
      return "CompositionViolated";
    case ErrorCode::NotACocone:
      return "NotACocone";
    case ErrorCode::MissingSectionSet:
      return "MissingSectionSet";
    case ErrorCode::MissingRestriction:
      return "MissingRestriction";
    case ErrorCode::PathDependent:
      return "PathDependent";
    case ErrorCode::UnknownSection:
      return "UnknownSection";
    case ErrorCode::DuplicateElement:
      return "DuplicateElement";
    case ErrorCode::SquareFails:
      return "SquareFails";
    case ErrorCode::BaseMismatch:
      return "BaseMismatch";
    case ErrorCode::PointNotInOpen:
      return "PointNotInOpen";
    case ErrorCode::NotASubset:
      return "NotASubset";
    case ErrorCode::NotSurjective:
      return "NotSurjective";
    case ErrorCode::NotLocalHomeo:
      return "NotLocalHomeo";
    case ErrorCode::EmptyFiber:
      return "EmptyFiber";
    case ErrorCode::ConditionIFails:
      return "ConditionIFails";
    case ErrorCode::ConditionIIFails:
      return "ConditionIIFails";
    case ErrorCode::ConditionIIIFails:
      return "ConditionIIIFails";
    case ErrorCode::TriangleFails:
      return "TriangleFails";
    case ErrorCode::NotComplete:
      return "NotComplete";
    case ErrorCode::TheoremViolation:
      return "TheoremViolation";
    case ErrorCode::SyntaxError:
      return "SyntaxError";
    case ErrorCode::InvalidFormat:
      return "InvalidFormat";
    case ErrorCode::GenerationExhausted:
      return "GenerationExhausted";
    case ErrorCode::Inapplicable:
      return "Inapplicable";
  }
  return "Unknown";
}

}  // namespace finsheaf
