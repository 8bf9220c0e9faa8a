#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "finsheaf/etale.hpp"
#include "finsheaf/presheaf.hpp"
#include "finsheaf/topology.hpp"

namespace finsheaf {

enum class ObjectKind { Space, Map, Presheaf, Sheaf };

std::string to_string(ObjectKind kind);

/// One validated object read from a file. Exactly the member matching
/// `kind` is set.
struct Loaded {
  ObjectKind kind = ObjectKind::Space;
  SpacePtr space;
  std::optional<ContinuousMap> map;
  PresheafPtr presheaf;
  SheafPtr sheaf;
};

/// Parses JSON text; nested spaces given as strings are paths relative to
/// `base_dir`. Syntax errors are SyntaxError("line L, col C: ..."); other
/// errors carry the JSON pointer of the offending value in their witness.
Loaded parse_text(const std::string& text, const std::filesystem::path& base_dir = ".");
Loaded parse_file(const std::filesystem::path& path);

SpacePtr load_space(const std::filesystem::path& path);
ContinuousMap load_map(const std::filesystem::path& path);
PresheafPtr load_presheaf(const std::filesystem::path& path);
SheafPtr load_sheaf(const std::filesystem::path& path);

/// Pretty-printed JSON, two-space indent, trailing newline. Presheaf
/// restrictions are written for covering pairs of the inclusion order only.
std::string serialize(const FiniteSpace& space);
std::string serialize(const ContinuousMap& map);
std::string serialize(const Presheaf& presheaf);
std::string serialize(const EtaleSheaf& sheaf);

}  // namespace finsheaf
