#include "finsheaf/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace finsheaf {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Runs f, prefixing the witness of any library error with a location.
template <class F>
auto located(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    fail(e.code(), where + ": " + e.witness());
  }
}

const json& member(const json& j, const char* key, const std::string& ptr) {
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorCode::InvalidFormat, "at " + ptr + ": missing key \"" + key + "\"");
  return *it;
}

void expect(bool ok, const std::string& ptr, const char* what) {
  if (!ok) fail(ErrorCode::InvalidFormat, "at " + ptr + ": expected " + what);
}

std::vector<std::string> strings(const json& j, const std::string& ptr) {
  expect(j.is_array(), ptr, "an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    expect(j[i].is_string(), ptr + "/" + std::to_string(i), "a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

std::map<std::string, std::string> string_map(const json& j, const std::string& ptr) {
  expect(j.is_object(), ptr, "an object of strings");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) {
    expect(v.is_string(), ptr + "/" + k, "a string");
    out.emplace(k, v.get<std::string>());
  }
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidFormat, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    fail(ErrorCode::SyntaxError, "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg);
  }
}

ObjectKind kind_of(const json& j) {
  expect(j.is_object(), "/", "an object");
  if (j.contains("points")) return ObjectKind::Space;
  if (j.contains("domain")) return ObjectKind::Map;
  if (j.contains("sections")) return ObjectKind::Presheaf;
  if (j.contains("total")) return ObjectKind::Sheaf;
  fail(ErrorCode::InvalidFormat, "at /: not a space, map, presheaf or sheaf");
}

SpacePtr space_from(const json& j, const std::string& ptr) {
  expect(j.is_object(), ptr, "a space object");
  std::vector<std::string> points = strings(member(j, "points", ptr), ptr + "/points");
  const json& opens_json = member(j, "opens", ptr);
  expect(opens_json.is_array(), ptr + "/opens", "an array");
  std::vector<std::vector<std::string>> opens;
  for (std::size_t i = 0; i < opens_json.size(); ++i) {
    const std::string at = ptr + "/opens/" + std::to_string(i);
    opens.push_back(strings(opens_json[i], at));
    for (std::size_t k = 0; k < opens.back().size(); ++k) {
      if (std::find(points.begin(), points.end(), opens.back()[k]) == points.end()) {
        fail(ErrorCode::UnknownPoint, "at " + at + "/" + std::to_string(k) + ": " + opens.back()[k]);
      }
    }
  }
  return located("at " + ptr, [&] { return share(validate_space(std::move(points), opens)); });
}

SpacePtr space_or_path(const json& j, const std::string& ptr, const fs::path& dir) {
  if (j.is_string()) {
    const fs::path path = dir / j.get<std::string>();
    return located("at " + ptr, [&] { return load_space(path); });
  }
  return space_from(j, ptr);
}

ContinuousMap map_from(const json& j, const fs::path& dir) {
  SpacePtr domain = space_or_path(member(j, "domain", "/"), "/domain", dir);
  SpacePtr codomain = space_or_path(member(j, "codomain", "/"), "/codomain", dir);
  auto assignment = string_map(member(j, "map", "/"), "/map");
  return located("at /map", [&] { return validate_map(domain, codomain, assignment); });
}

PresheafPtr presheaf_from(const json& j, const fs::path& dir) {
  RawPresheaf raw;
  raw.base = space_or_path(member(j, "space", "/"), "/space", dir);
  const json& sections = member(j, "sections", "/");
  expect(sections.is_object(), "/sections", "an object");
  for (const auto& [key, value] : sections.items()) {
    const std::string at = "/sections/" + key;
    const Subset u = located("at " + at, [&] { return raw.base->parse_open_name(key); });
    if (!raw.sections.emplace(u, strings(value, at)).second) {
      fail(ErrorCode::InvalidFormat, "at " + at + ": open listed twice");
    }
  }
  if (auto it = j.find("restrictions"); it != j.end()) {
    expect(it->is_object(), "/restrictions", "an object");
    for (const auto& [key, value] : it->items()) {
      const std::string at = "/restrictions/" + key;
      const auto arrow = key.find("->");
      if (arrow == std::string::npos) fail(ErrorCode::InvalidFormat, "at " + at + ": expected a key U->V");
      RawRestriction r;
      r.from = located("at " + at, [&] { return raw.base->parse_open_name(key.substr(0, arrow)); });
      r.to = located("at " + at, [&] { return raw.base->parse_open_name(key.substr(arrow + 2)); });
      r.values = string_map(value, at);
      raw.restrictions.push_back(std::move(r));
    }
  }
  return located("in presheaf", [&] { return share(validate_presheaf(raw)); });
}

SheafPtr sheaf_from(const json& j, const fs::path& dir) {
  SpacePtr total = space_or_path(member(j, "total", "/"), "/total", dir);
  SpacePtr base = space_or_path(member(j, "base", "/"), "/base", dir);
  auto assignment = string_map(member(j, "projection", "/"), "/projection");
  return located("at /projection", [&] {
    return share(validate_etale(total, base, validate_map(total, base, assignment)));
  });
}

ordered space_json(const FiniteSpace& space) {
  ordered opens = ordered::array();
  for (Subset u : space.opens()) opens.push_back(space.names_of(u));
  return ordered{{"points", space.points()}, {"opens", opens}};
}

std::string dump(const ordered& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::Space: return "space";
    case ObjectKind::Map: return "map";
    case ObjectKind::Presheaf: return "presheaf";
    case ObjectKind::Sheaf: return "sheaf";
  }
  return "?";
}

Loaded parse_text(const std::string& text, const fs::path& base_dir) {
  const json j = parse_json(text);
  Loaded out;
  out.kind = kind_of(j);
  switch (out.kind) {
    case ObjectKind::Space: out.space = space_from(j, ""); break;
    case ObjectKind::Map: out.map = map_from(j, base_dir); break;
    case ObjectKind::Presheaf: out.presheaf = presheaf_from(j, base_dir); break;
    case ObjectKind::Sheaf: out.sheaf = sheaf_from(j, base_dir); break;
  }
  return out;
}

Loaded parse_file(const fs::path& path) {
  const std::string text = read_text(path);
  return located(path.string(), [&] { return parse_text(text, path.parent_path()); });
}

namespace {

Loaded load_kind(const fs::path& path, ObjectKind kind) {
  Loaded l = parse_file(path);
  if (l.kind != kind) {
    fail(ErrorCode::InvalidFormat, path.string() + ": expected a " + to_string(kind) + ", found a " + to_string(l.kind));
  }
  return l;
}

}  // namespace

SpacePtr load_space(const fs::path& path) { return load_kind(path, ObjectKind::Space).space; }
ContinuousMap load_map(const fs::path& path) { return *load_kind(path, ObjectKind::Map).map; }
PresheafPtr load_presheaf(const fs::path& path) { return load_kind(path, ObjectKind::Presheaf).presheaf; }
SheafPtr load_sheaf(const fs::path& path) { return load_kind(path, ObjectKind::Sheaf).sheaf; }

std::string serialize(const FiniteSpace& space) { return dump(space_json(space)); }

std::string serialize(const ContinuousMap& map) {
  ordered assignment = ordered::object();
  for (std::size_t x = 0; x < map.domain().size(); ++x) assignment[map.domain().name(x)] = map.codomain().name(map(x));
  return dump(ordered{{"domain", space_json(map.domain())}, {"codomain", space_json(map.codomain())}, {"map", assignment}});
}

std::string serialize(const Presheaf& s) {
  const FiniteSpace& base = s.base();
  const auto& opens = s.opens();
  ordered sections = ordered::object();
  for (std::size_t ui = 0; ui < opens.size(); ++ui) sections[base.open_name(opens[ui])] = s.elements_at(ui);
  ordered restrictions = ordered::object();
  for (std::size_t u = 0; u < opens.size(); ++u) {
    for (std::size_t v = 0; v < opens.size(); ++v) {
      if (v == u || !opens[v].is_subset_of(opens[u])) continue;
      bool covering = true;
      for (std::size_t w = 0; w < opens.size() && covering; ++w) {
        covering = w == u || w == v || !(opens[v].is_subset_of(opens[w]) && opens[w].is_subset_of(opens[u]));
      }
      if (!covering) continue;
      ordered values = ordered::object();
      const auto& map = s.restriction_at(u, v);
      for (std::size_t e = 0; e < map.size(); ++e) values[s.elements_at(u)[e]] = s.elements_at(v)[map[e]];
      restrictions[base.open_name(opens[u]) + "->" + base.open_name(opens[v])] = values;
    }
  }
  return dump(ordered{{"space", space_json(base)}, {"sections", sections}, {"restrictions", restrictions}});
}

std::string serialize(const EtaleSheaf& sheaf) {
  ordered projection = ordered::object();
  for (std::size_t z = 0; z < sheaf.total().size(); ++z) {
    projection[sheaf.total().name(z)] = sheaf.base().name(sheaf.project(z));
  }
  return dump(
      ordered{{"total", space_json(sheaf.total())}, {"base", space_json(sheaf.base())}, {"projection", projection}});
}

}  // namespace finsheaf
