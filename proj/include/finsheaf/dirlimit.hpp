#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finsheaf/error.hpp"

namespace finsheaf {

/// Input form of a directed system of finite sets. Elements are referred to
/// by position within their carrier; `maps[{a, b}]` is the transition map
/// from carrier a to carrier b for a <= b. Reflexive pairs are implied and
/// their maps default to the identity.
struct RawDirectedSystem {
  std::vector<std::string> indices;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  std::vector<std::vector<std::string>> carriers;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
};

/// A validated right directed system of finite sets: (A.2) identities and
/// (A.3) composition hold, and every pair of indices has an upper bound.
class DirectedSystem {
 public:
  std::size_t index_count() const { return indices_.size(); }
  const std::string& index_name(std::size_t a) const { return indices_[a]; }
  bool leq(std::size_t a, std::size_t b) const { return leq_[a * indices_.size() + b]; }
  const std::vector<std::string>& carrier(std::size_t a) const { return carriers_[a]; }
  /// Transition map from carrier a to carrier b; requires leq(a, b).
  const std::vector<std::size_t>& transition(std::size_t a, std::size_t b) const {
    return maps_[a * indices_.size() + b];
  }

  friend DirectedSystem validate_system(RawDirectedSystem raw);

 private:
  std::vector<std::string> indices_;
  std::vector<bool> leq_;
  std::vector<std::vector<std::string>> carriers_;
  std::vector<std::vector<std::size_t>> maps_;
};

DirectedSystem validate_system(RawDirectedSystem raw);

/// An element of the tagged disjoint union of the carriers.
struct TaggedElement {
  std::size_t index;
  std::size_t element;
  auto operator<=>(const TaggedElement&) const = default;
};

/// The quotient of the tagged union by eventual agreement, with the
/// canonical maps into it. Classes are ordered by their representative,
/// the least tagged member.
class DirectLimit {
 public:
  std::size_t class_count() const { return classes_.size(); }
  const std::vector<TaggedElement>& members(std::size_t c) const { return classes_[c]; }
  TaggedElement representative(std::size_t c) const { return classes_[c].front(); }
  /// Canonical map of index a applied to element x.
  std::size_t canonical(std::size_t a, std::size_t x) const { return class_of_[a][x]; }

  friend DirectLimit colimit(const DirectedSystem& system);

 private:
  std::vector<std::vector<TaggedElement>> classes_;
  std::vector<std::vector<std::size_t>> class_of_;
};

DirectLimit colimit(const DirectedSystem& system);

/// A family of maps u_a : E_a -> {0, ..., target_size - 1}.
struct Cocone {
  std::size_t target_size = 0;
  std::vector<std::vector<std::size_t>> legs;
};

/// Throws NotACocone when some u_b o f_{b,a} differs from u_a.
void check_cocone(const DirectedSystem& system, const Cocone& cocone);

/// The unique map u on classes with u o f_a = u_a.
std::vector<std::size_t> universal_map(const DirectedSystem& system, const DirectLimit& limit, const Cocone& cocone);

struct SurjectivityVerdict {
  bool surjective;
  std::optional<std::size_t> missed;
};

struct InjectivityVerdict {
  bool injective;
  /// Two distinct classes with the same image.
  std::optional<std::pair<std::size_t, std::size_t>> collision;
};

/// Direct surjectivity of u, cross-checked against the union-of-images
/// criterion. A disagreement throws TheoremViolation.
SurjectivityVerdict check_surjectivity_criterion(const DirectedSystem& system, const Cocone& cocone,
                                                 const DirectLimit& limit, const std::vector<std::size_t>& u);

/// Direct injectivity of u, cross-checked against the eventual-agreement
/// criterion. A disagreement throws TheoremViolation.
InjectivityVerdict check_injectivity_criterion(const DirectedSystem& system, const Cocone& cocone,
                                               const DirectLimit& limit, const std::vector<std::size_t>& u);

/// One line per class: `{rep} <- [members]`, sorted.
std::string dump(const DirectedSystem& system, const DirectLimit& limit);

}  // namespace finsheaf
