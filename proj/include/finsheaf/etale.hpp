#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "finsheaf/presheaf.hpp"
#include "finsheaf/topology.hpp"

namespace finsheaf {

/// Bound on candidate functions for any section-style enumeration.
inline constexpr std::size_t kMaxCandidateFunctions = 1'000'000;

/// A sheaf in étale form: a surjective local homeomorphism from the total
/// space onto the base.
class EtaleSheaf {
 public:
  const FiniteSpace& total() const { return projection_.domain(); }
  const FiniteSpace& base() const { return projection_.codomain(); }
  const SpacePtr& total_ptr() const { return projection_.domain_ptr(); }
  const SpacePtr& base_ptr() const { return projection_.codomain_ptr(); }
  const ContinuousMap& projection() const { return projection_; }
  std::size_t project(std::size_t z) const { return projection_(z); }
  /// Total points over x, ascending.
  const std::vector<std::size_t>& fiber_at(std::size_t x) const { return fibers_[x]; }

  bool operator==(const EtaleSheaf& o) const { return projection_ == o.projection_; }

  friend EtaleSheaf validate_etale(SpacePtr total, SpacePtr base, const ContinuousMap& projection);

 private:
  explicit EtaleSheaf(ContinuousMap projection) : projection_(std::move(projection)) {}

  ContinuousMap projection_;
  std::vector<std::vector<std::size_t>> fibers_;
};

using SheafPtr = std::shared_ptr<const EtaleSheaf>;

inline SheafPtr share(EtaleSheaf s) { return std::make_shared<const EtaleSheaf>(std::move(s)); }

/// Throws NotSurjective(base point) or NotLocalHomeo(total point).
EtaleSheaf validate_etale(SpacePtr total, SpacePtr base, const ContinuousMap& projection);

/// Whether projection restricted to the open b is injective, has open
/// image, and is a homeomorphism onto that image.
bool is_local_homeomorphism_on(const ContinuousMap& projection, Subset b);

/// Exhaustive form of the local homeomorphism condition at z: the first
/// open (canonical order) containing z on which the projection restricts to
/// a homeomorphism onto an open set, tested by validating both the
/// restriction and its inverse as maps between subspaces.
std::optional<Subset> local_homeomorphism_witness(const ContinuousMap& projection, std::size_t z);

std::vector<std::size_t> fiber(const EtaleSheaf& sheaf, std::string_view x);

/// A function from an open of a base space into a total space. `values`
/// has one slot per base point; slots outside the domain hold kNone.
struct Section {
  Subset domain;
  std::vector<std::size_t> values;

  Subset image() const;
  Section restricted(Subset v) const;
  auto operator<=>(const Section&) const = default;
};

/// Every continuous choice of one candidate per point of the open u of
/// `domain`, into `target`. Throws TooLarge past kMaxCandidateFunctions.
std::vector<Section> continuous_lifts(const FiniteSpace& domain, Subset u, const FiniteSpace& target,
                                      const std::vector<std::vector<std::size_t>>& candidates);

/// Gamma(U): all sections over the open u, lexicographic by values.
std::vector<Section> sections(const EtaleSheaf& sheaf, Subset u);
bool is_section(const EtaleSheaf& sheaf, const Section& s);

/// `U: x1->z1, x2->z2`, keys sorted.
std::string section_line(const EtaleSheaf& sheaf, const Section& s);

/// Base x M with the topology generated by the sets U x {m}. Total points
/// are named `x:m`.
EtaleSheaf constant_sheaf(SpacePtr base, const std::vector<std::string>& values);

/// Builds a sheaf from fibers and a family of candidate sections. Total
/// point i is the i-th name when the fibers are concatenated in base order.
/// Throws ConditionIFails, ConditionIIFails, ConditionIIIFails, NotABasis.
EtaleSheaf from_fibers_and_sections(SpacePtr base, const std::vector<std::vector<std::string>>& fibers,
                                    const std::vector<Section>& sigma);

/// The inverse of the projection over an open b on which it is injective,
/// if that inverse is a section over the (open) image.
std::optional<Section> inverse_section(const EtaleSheaf& sheaf, Subset b);

class SheafMorphism {
 public:
  const EtaleSheaf& source() const { return *source_; }
  const EtaleSheaf& target() const { return *target_; }
  const SheafPtr& source_ptr() const { return source_; }
  const SheafPtr& target_ptr() const { return target_; }
  const ContinuousMap& map() const { return map_; }
  std::size_t operator()(std::size_t z) const { return map_(z); }

  bool operator==(const SheafMorphism& o) const {
    return *source_ == *o.source_ && *target_ == *o.target_ && map_ == o.map_;
  }

  friend SheafMorphism validate_sheaf_morphism(SheafPtr source, SheafPtr target,
                                               std::vector<std::size_t> assignment);

 private:
  SheafMorphism(SheafPtr s, SheafPtr t, ContinuousMap m)
      : source_(std::move(s)), target_(std::move(t)), map_(std::move(m)) {}

  SheafPtr source_;
  SheafPtr target_;
  ContinuousMap map_;
};

/// Throws BaseMismatch, NotContinuous or TriangleFails(z). Fiber preservation
/// and the local homeomorphism property are re-checked afterwards; their
/// failure is a TheoremViolation.
SheafMorphism validate_sheaf_morphism(SheafPtr source, SheafPtr target, std::vector<std::size_t> assignment);
SheafMorphism identity_morphism(SheafPtr sheaf);
/// psi after phi.
SheafMorphism compose(const SheafMorphism& psi, const SheafMorphism& phi);
/// Bijective with a sheaf-morphism inverse.
bool is_isomorphism(const SheafMorphism& m);
SheafMorphism inverse(const SheafMorphism& m);

/// The three equivalent characterisations of a sheaf morphism, evaluated
/// independently for a continuous map between total spaces.
struct MorphismCharacterisations {
  bool commutes;           // projection' o map = projection
  bool maps_sections;      // s -> map o s sends sections to sections, for every open
  bool local_sections;     // every point lies on a section whose image is a section
  bool agree() const { return commutes == maps_sections && maps_sections == local_sections; }
};

MorphismCharacterisations morphism_characterisations(const EtaleSheaf& source, const EtaleSheaf& target,
                                                     const ContinuousMap& map);
bool morphism_characterizations_agree(const EtaleSheaf& source, const EtaleSheaf& target, const ContinuousMap& map);

/// The sheaf over the open subspace a, with total space the preimage of a.
struct RestrictedSheaf {
  SheafPtr sheaf;
  Subspace base;
  Subspace total;
};

RestrictedSheaf restrict_sheaf(const EtaleSheaf& sheaf, Subset a);

/// Searches fiber-preserving bijections for an isomorphism. Throws TooLarge
/// when the candidate count exceeds kMaxCandidateFunctions.
std::optional<SheafMorphism> are_isomorphic(SheafPtr a, SheafPtr b);

}  // namespace finsheaf
