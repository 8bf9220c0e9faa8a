#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finsheaf/etale.hpp"
#include "finsheaf/presheaf.hpp"

namespace finsheaf {

/// The sheaf of germs of a presheaf. The total point for the germ with
/// representative j in S(min_open(x)) has index offset[x] + j and is named
/// `x:<element>`.
struct Sheafification {
  PresheafPtr presheaf;
  SheafPtr sheaf;
  std::vector<Stalk> stalks;
  std::vector<std::size_t> offset;
  /// rho[ui][s]: the section x -> germ of s at x, over opens[ui].
  std::vector<std::vector<Section>> rho;

  std::size_t total_point(std::size_t x, std::size_t rep) const { return offset[x] + rep; }
  /// Germ of element s of the open with index ui at x, as a total point.
  std::size_t germ_point(std::size_t ui, std::size_t s, std::size_t x) const { return rho[ui][s].values[x]; }
  /// Inverse of total_point.
  Germ germ_of(std::size_t z) const;
};

/// Reports NotSurjective when some S(min_open(x)) is empty.
Sheafification sheafify(PresheafPtr s);

/// Presheaf of sections of a sheaf. Element i of the open with index ui is
/// sections[ui][i], named `{x=z;...}` in base point order.
struct SectionPresheaf {
  SheafPtr sheaf;
  PresheafPtr presheaf;
  std::vector<std::vector<Section>> sections;

  /// Throws UnknownSection when s is not among the sections over its domain.
  std::size_t index_of(const Section& s) const;

 private:
  friend SectionPresheaf section_presheaf(SheafPtr sheaf);
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> lookup_;
};

SectionPresheaf section_presheaf(SheafPtr sheaf);

/// Element name used for a section in section presheaves.
std::string section_name(const FiniteSpace& base, const FiniteSpace& total, const Section& s);

/// The evaluation map from the sheaf of germs of the section presheaf back
/// to the sheaf. Throws TheoremViolation unless it is an isomorphism.
SheafMorphism counit(SheafPtr sheaf);

/// S together with rho: S -> Gamma(Sh(S)).
struct Completion {
  Sheafification sheafification;
  SectionPresheaf sections;
  PresheafMorphism rho;
};

Completion rho_morphism(PresheafPtr s);

/// The factorisation psi: Gamma(Sh(S)) -> E of phi: S -> E through rho.
struct Factorisation {
  Completion completion;
  PresheafMorphism psi;
};

/// Throws NotComplete when the target of phi is not complete. Gluing is done
/// over the cover of each open by the minimal opens of its points; a missing
/// or ambiguous gluing, or psi o rho != phi, is a TheoremViolation.
Factorisation factor_through(const PresheafMorphism& phi);

/// Every presheaf morphism source -> target, or nullopt when the number of
/// candidate component families exceeds `limit`.
std::optional<std::vector<PresheafMorphism>> all_morphisms(PresheafPtr source, PresheafPtr target,
                                                           double limit = 1e4);

/// Germ-wise induced map Sh(phi).
SheafMorphism sheafify_morphism(const PresheafMorphism& phi);
/// Post-composition Gamma(phi) between the section presheaves.
PresheafMorphism section_morphism(const SheafMorphism& phi);

/// V -> S(f^-1(V)) on the codomain of f.
Presheaf pushout_presheaf(const ContinuousMap& f, const Presheaf& s);
PresheafMorphism pushout_morphism(const ContinuousMap& f, const PresheafMorphism& phi);
/// Sheafification of the push-out of the section presheaf.
EtaleSheaf pushforward_sheaf(const ContinuousMap& f, SheafPtr sheaf);

/// Fiber product {(x, z) : f(x) = pi(z)} over the domain of f, with the
/// topology induced from the product and projection (x, z) -> x. Points are
/// named `[x|z]`; pairs[i] holds the coordinates of total point i.
struct Pullback {
  SheafPtr sheaf;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

Pullback pullback_sheaf(const ContinuousMap& f, SheafPtr sheaf);

/// The presheaf of lifts t: U -> total with pi o t = f on U, and its
/// sheafification.
struct RelativeSections {
  PresheafPtr presheaf;
  std::vector<std::vector<Section>> lifts;
  Sheafification sheafification;
};

RelativeSections pullback_via_presheaf(const ContinuousMap& f, SheafPtr sheaf);

/// The germ of a lift t at x goes to (x, t(x)).
SheafMorphism pullback_comparison(const RelativeSections& via, const Pullback& pullback);

/// Name-matching map from the sheafification of S restricted to A to the
/// restriction of Sh(S) to A.
SheafMorphism sheafify_restriction_comparison(PresheafPtr s, Subset a);

/// First structural difference between two presheaves, if any.
std::optional<std::string> presheaf_difference(const Presheaf& a, const Presheaf& b);

/// Gamma(S|_A) against Gamma(S)|_A.
std::optional<std::string> section_restriction_difference(SheafPtr sheaf, Subset a);

/// The fiber of a sheaf at x against the stalk of its section presheaf,
/// matched by evaluating germs at x. Returns a description of the first
/// defect of the bijection.
std::optional<std::string> sheaf_stalk_defect(const SectionPresheaf& gamma, std::size_t x);

/// The stalk of S at x against the stalk of Gamma(Sh(S)) at x, matched by
/// sending the germ of s to the germ of rho(s).
std::optional<std::string> presheaf_stalk_defect(const Completion& completion, std::size_t x);

}  // namespace finsheaf
