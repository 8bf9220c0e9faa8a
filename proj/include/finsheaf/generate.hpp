#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "finsheaf/dirlimit.hpp"
#include "finsheaf/etale.hpp"
#include "finsheaf/presheaf.hpp"

namespace finsheaf {

inline constexpr std::size_t kMaxGeneratedPoints = 6;
inline constexpr std::size_t kMaxGeneratedSectionSet = 4;

using Rng = std::mt19937_64;

/// Engine for item `index` of the stream with the given seed.
Rng stream_rng(std::uint64_t seed, std::uint64_t index);
std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);

/// Alexandrov topology of a random preorder on n points named prefix0...
SpacePtr random_space(Rng& rng, std::size_t n, const std::string& prefix);

/// Hasse maps chosen element by element as random compatible families, so
/// every composite is path independent. Retries 100 times for nonempty sets
/// over all minimal opens, then falls back to the one-element presheaf.
PresheafPtr random_presheaf(Rng& rng, SpacePtr space);

/// A random order-preserving, hence continuous, map.
ContinuousMap random_map(Rng& rng, SpacePtr domain, SpacePtr codomain);

struct RandomInstance {
  std::string name;
  SpacePtr space;
  PresheafPtr presheaf;
  /// Sheafification of `presheaf`.
  SheafPtr sheaf;
  /// f: space -> codomain, with a sheaf on the codomain to pull back.
  std::optional<ContinuousMap> map;
  SheafPtr codomain_sheaf;
};

/// Deterministic per (seed, index). Throws GenerationExhausted unless
/// 1 <= max_points <= 6.
RandomInstance random_instance(std::uint64_t seed, std::size_t index, std::size_t max_points);
std::vector<RandomInstance> gen_random_instances(std::uint64_t seed, std::size_t count, std::size_t max_points);

/// A random right directed system (one or two mutually related top indices)
/// with a random cocone into {0, ..., target_size - 1}.
struct RandomSystem {
  DirectedSystem system;
  Cocone cocone;
};

RandomSystem random_system(std::uint64_t seed, std::size_t index);

}  // namespace finsheaf
