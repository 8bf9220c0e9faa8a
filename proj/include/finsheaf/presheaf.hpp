#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "finsheaf/dirlimit.hpp"
#include "finsheaf/topology.hpp"

namespace finsheaf {

/// Marker for "no value" in per-point tables.
inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

/// A presheaf of finite sets. Opens are addressed either by Subset or by
/// their position in `base().opens()`; elements by position within S(U).
class Presheaf {
 public:
  /// Builds from complete tables and verifies the identity and composition
  /// laws. `restriction(u, v)` is called for every pair of open indices with
  /// opens[v] a subset of opens[u].
  template <class RestrictionFn>
  static Presheaf from_tables(SpacePtr base, std::vector<std::vector<std::string>> elements,
                              RestrictionFn&& restriction);

  const FiniteSpace& base() const { return *base_; }
  const SpacePtr& base_ptr() const { return base_; }
  const std::vector<Subset>& opens() const { return base_->opens(); }
  std::size_t open_count() const { return elements_.size(); }
  /// Throws NotOpen.
  std::size_t open_index(Subset u) const;

  const std::vector<std::string>& elements(Subset u) const { return elements_[open_index(u)]; }
  const std::vector<std::string>& elements_at(std::size_t ui) const { return elements_[ui]; }
  /// Throws UnknownSection.
  std::size_t element_index(Subset u, std::string_view name) const;

  /// Throws NotASubset unless v is a subset of u.
  const std::vector<std::size_t>& restriction(Subset u, Subset v) const;
  const std::vector<std::size_t>& restriction_at(std::size_t ui, std::size_t vi) const {
    return maps_[ui * elements_.size() + vi];
  }

  bool operator==(const Presheaf& o) const {
    return *base_ == *o.base_ && elements_ == o.elements_ && maps_ == o.maps_;
  }

 private:
  Presheaf(SpacePtr base, std::vector<std::vector<std::string>> elements);
  void verify_laws() const;

  SpacePtr base_;
  std::unordered_map<Subset, std::size_t> open_index_;
  std::vector<std::vector<std::string>> elements_;
  std::vector<std::unordered_map<std::string, std::size_t>> element_index_;
  std::vector<std::vector<std::size_t>> maps_;
};

using PresheafPtr = std::shared_ptr<const Presheaf>;

inline PresheafPtr share(Presheaf p) { return std::make_shared<const Presheaf>(std::move(p)); }

template <class RestrictionFn>
Presheaf Presheaf::from_tables(SpacePtr base, std::vector<std::vector<std::string>> elements,
                               RestrictionFn&& restriction) {
  Presheaf p(std::move(base), std::move(elements));
  const auto& opens = p.opens();
  const std::size_t m = opens.size();
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (opens[v].is_subset_of(opens[u])) p.maps_[u * m + v] = restriction(u, v);
    }
  }
  p.verify_laws();
  return p;
}

struct RawRestriction {
  Subset from;
  Subset to;
  std::map<std::string, std::string> values;
};

/// Input form of a presheaf. Restrictions may be listed for every pair or
/// only for covering pairs of the inclusion order; identities are implied.
struct RawPresheaf {
  SpacePtr base;
  std::map<Subset, std::vector<std::string>> sections;
  std::vector<RawRestriction> restrictions;
};

Presheaf validate_presheaf(const RawPresheaf& raw);

/// The presheaf on the open subspace `a`, reusing the sections and
/// restrictions of `s` unchanged.
Presheaf restrict_presheaf(const Presheaf& s, Subset a);

/// The colimit of S(U) over the open neighbourhoods of a point, together
/// with its identification with S(minimal open).
struct Stalk {
  std::size_t point = 0;
  /// Open indices of the neighbourhoods, in directed-system index order.
  std::vector<std::size_t> neighbourhoods;
  /// Position of each open index in `neighbourhoods` (kNone when x is not in it).
  std::vector<std::size_t> position;
  DirectedSystem system;
  DirectLimit limit;
  /// element of S(min_open(x)) -> class, and back.
  std::vector<std::size_t> class_of_rep;
  std::vector<std::size_t> rep_of_class;

  std::size_t size() const { return limit.class_count(); }
  /// Class of element s of the open with index ui. Throws PointNotInOpen.
  std::size_t class_of(std::size_t ui, std::size_t s) const;
};

Stalk stalk(const Presheaf& s, std::size_t point);
Stalk stalk(const Presheaf& s, std::string_view point);
std::vector<Stalk> all_stalks(const Presheaf& s);

/// A germ, named by its canonical representative in S(min_open(point)).
struct Germ {
  std::size_t point;
  std::size_t rep;
  bool operator==(const Germ&) const = default;
};

Germ germ(const Presheaf& s, const Stalk& stalk, Subset u, std::size_t element);
Germ germ(const Presheaf& s, Subset u, std::string_view element, std::string_view point);

class PresheafMorphism {
 public:
  const Presheaf& source() const { return *source_; }
  const Presheaf& target() const { return *target_; }
  const PresheafPtr& source_ptr() const { return source_; }
  const PresheafPtr& target_ptr() const { return target_; }
  const std::vector<std::size_t>& component_at(std::size_t ui) const { return components_[ui]; }
  const std::vector<std::size_t>& component(Subset u) const { return components_[source_->open_index(u)]; }
  const std::vector<std::vector<std::size_t>>& components() const { return components_; }

  bool operator==(const PresheafMorphism& o) const {
    return *source_ == *o.source_ && *target_ == *o.target_ && components_ == o.components_;
  }

  friend PresheafMorphism validate_morphism(PresheafPtr source, PresheafPtr target,
                                            std::vector<std::vector<std::size_t>> components);

 private:
  PresheafPtr source_;
  PresheafPtr target_;
  std::vector<std::vector<std::size_t>> components_;
};

/// Components are indexed by open index then source element. Throws
/// BaseMismatch or SquareFails(U, V, element).
PresheafMorphism validate_morphism(PresheafPtr source, PresheafPtr target,
                                   std::vector<std::vector<std::size_t>> components);
PresheafMorphism validate_morphism(PresheafPtr source, PresheafPtr target,
                                   const std::map<Subset, std::map<std::string, std::string>>& components);
PresheafMorphism identity_morphism(PresheafPtr s);
/// psi after phi.
PresheafMorphism compose(const PresheafMorphism& psi, const PresheafMorphism& phi);

struct MorphismClass {
  bool injective;
  bool surjective;
  bool isomorphism;
  bool operator==(const MorphismClass&) const = default;
};

MorphismClass classify_morphism(const PresheafMorphism& m);

// ---------------------------------------------------------------------------
// Completeness and flabbiness.

enum class CoverEnumeration {
  /// Covers whose members are pairwise incomparable. Equivalent to all
  /// covers for both gluing conditions, since adding a member contained in
  /// another adds only a forced, compatible component.
  Antichains,
  /// Every set of nonempty opens with the right union. Exponential.
  AllSubsets,
};

struct CoverOptions {
  CoverEnumeration enumeration = CoverEnumeration::Antichains;
  /// Covers containing U itself can never fail either condition.
  bool include_covers_with_whole = false;
};

/// Open covers of u by nonempty opens, deduplicated, canonical order. The
/// empty open has exactly the empty cover.
std::vector<std::vector<Subset>> open_covers(const FiniteSpace& space, Subset u, CoverOptions options = {});

struct S1Failure {
  Subset open;
  std::vector<Subset> cover;
  std::size_t first;
  std::size_t second;
};

struct S2Failure {
  Subset open;
  std::vector<Subset> cover;
  std::vector<std::size_t> family;
};

struct FlabbyFailure {
  Subset from;
  Subset to;
  std::size_t missed;
};

template <class Failure>
struct Verdict {
  std::optional<Failure> failure;
  bool holds() const { return !failure.has_value(); }
};

Verdict<S1Failure> check_s1(const Presheaf& s, CoverOptions options = {});
Verdict<S2Failure> check_s2(const Presheaf& s, CoverOptions options = {});
bool is_complete(const Presheaf& s);
Verdict<FlabbyFailure> is_flabby(const Presheaf& s);

/// Whether the family (one element per cover member) agrees on every
/// nonempty pairwise intersection.
bool is_compatible(const Presheaf& s, const std::vector<Subset>& cover, const std::vector<std::size_t>& family);
/// Elements of S(u) restricting to the family on every member.
std::vector<std::size_t> gluings(const Presheaf& s, Subset u, const std::vector<Subset>& cover,
                                 const std::vector<std::size_t>& family);

std::string describe(const Presheaf& s, const S1Failure& f);
std::string describe(const Presheaf& s, const S2Failure& f);
std::string describe(const Presheaf& s, const FlabbyFailure& f);

}  // namespace finsheaf
