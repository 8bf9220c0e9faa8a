#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "finsheaf/error.hpp"
#include "finsheaf/subset.hpp"

namespace finsheaf {

/// Hard cap on the number of opens any space may enumerate.
inline constexpr std::size_t kMaxOpens = std::size_t{1} << 20;

class FiniteSpace;
using SpacePtr = std::shared_ptr<const FiniteSpace>;

/// A finite topological space. Points are named; subsets are bitmasks over
/// point indices in declaration order. The topology is held as the minimal
/// open neighbourhood of every point, which determines it completely, and
/// the explicit list of opens (canonically sorted) is materialised on demand.
///
/// Immutable after construction; copies share the open-set cache.
class FiniteSpace {
 public:
  /// Validates an explicit list of opens (the `validate_space` operation).
  static FiniteSpace validate(std::vector<std::string> points, const std::vector<Subset>& opens);

  /// Topology generated by a basis: every union of basis sets.
  static FiniteSpace from_basis(std::vector<std::string> points, const std::vector<Subset>& basis);

  /// Topology whose minimal open of point i is min_opens[i].
  static FiniteSpace from_min_opens(std::vector<std::string> points, std::vector<Subset> min_opens);

  static FiniteSpace discrete(std::vector<std::string> points);
  static FiniteSpace empty() { return discrete({}); }

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& name(std::size_t i) const { return points_.at(i); }
  Subset whole() const { return Subset::first(points_.size()); }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownPoint.
  std::size_t index_of(std::string_view name) const;

  Subset min_open(std::size_t i) const { return min_opens_.at(i); }
  const std::vector<Subset>& min_opens() const { return min_opens_; }
  bool is_open(Subset s) const;
  /// Specialisation preorder: x <= y iff x lies in every open containing y.
  bool below(std::size_t x, std::size_t y) const { return min_opens_[y].contains(x); }

  /// All opens in canonical order (cardinality, then mask). Throws TooLarge
  /// past kMaxOpens.
  const std::vector<Subset>& opens() const;
  /// Opens contained in `u`, canonical order.
  std::vector<Subset> opens_within(Subset u) const;

  Subset subset_of(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(Subset s) const;
  /// Sorted comma-joined point names; the empty set is "".
  std::string open_name(Subset s) const;
  Subset parse_open_name(std::string_view name) const;

  bool operator==(const FiniteSpace& other) const {
    return points_ == other.points_ && min_opens_ == other.min_opens_;
  }

 private:
  struct OpenCache;

  FiniteSpace(std::vector<std::string> points, std::vector<Subset> min_opens);

  std::vector<std::string> points_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Subset> min_opens_;
  std::shared_ptr<OpenCache> cache_;
};

/// An open subset viewed as a space in its own right, with the index maps
/// to and from the ambient space.
struct Subspace {
  FiniteSpace space;
  Subset in_parent;
  std::vector<std::size_t> to_parent;

  Subset lift(Subset local) const;
  Subset lower(Subset parent) const;
  std::size_t local_index(std::size_t parent_index) const;
};

Subspace subspace(const FiniteSpace& space, Subset points);

// Spec-level operations.
FiniteSpace validate_space(std::vector<std::string> points,
                           const std::vector<std::vector<std::string>>& raw_opens);
FiniteSpace generate_from_basis(std::vector<std::string> points,
                                const std::vector<std::vector<std::string>>& basis);
Subset min_open(const FiniteSpace& space, std::string_view point);
/// Connected components of an open set, ordered by lowest member.
std::vector<Subset> connected_components(const FiniteSpace& space, Subset u);

/// A continuous map between finite spaces.
class ContinuousMap {
 public:
  /// Throws NotContinuous with the canonically-first open whose preimage is
  /// not open.
  static ContinuousMap validate(SpacePtr domain, SpacePtr codomain, std::vector<std::size_t> assignment);
  static ContinuousMap identity(SpacePtr space);

  const FiniteSpace& domain() const { return *domain_; }
  const FiniteSpace& codomain() const { return *codomain_; }
  const SpacePtr& domain_ptr() const { return domain_; }
  const SpacePtr& codomain_ptr() const { return codomain_; }
  const std::vector<std::size_t>& assignment() const { return assignment_; }

  std::size_t operator()(std::size_t x) const { return assignment_[x]; }
  Subset image(Subset s) const;
  Subset preimage(Subset s) const;

  bool operator==(const ContinuousMap& o) const {
    return *domain_ == *o.domain_ && *codomain_ == *o.codomain_ && assignment_ == o.assignment_;
  }

 private:
  ContinuousMap(SpacePtr d, SpacePtr c, std::vector<std::size_t> a)
      : domain_(std::move(d)), codomain_(std::move(c)), assignment_(std::move(a)) {}

  SpacePtr domain_;
  SpacePtr codomain_;
  std::vector<std::size_t> assignment_;
};

ContinuousMap validate_map(SpacePtr domain, SpacePtr codomain,
                           const std::map<std::string, std::string>& assignment);
/// g after f.
ContinuousMap compose(const ContinuousMap& g, const ContinuousMap& f);

/// Returns the first open (canonical order) whose preimage is not open, by
/// scanning every open of the codomain. Independent of the minimal-open
/// criterion used by ContinuousMap::validate.
std::optional<Subset> discontinuity_by_opens(const FiniteSpace& domain, const FiniteSpace& codomain,
                                             const std::vector<std::size_t>& assignment);

inline SpacePtr share(FiniteSpace space) { return std::make_shared<const FiniteSpace>(std::move(space)); }

}  // namespace finsheaf
