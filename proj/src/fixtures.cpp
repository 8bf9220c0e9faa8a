#include "finsheaf/fixtures.hpp"

#include "finsheaf/functors.hpp"

namespace finsheaf::fixtures {

namespace {

Subset set_of(const FiniteSpace& space, std::initializer_list<const char*> names) {
  std::vector<std::string> v(names.begin(), names.end());
  return space.subset_of(v);
}

}  // namespace

SpacePtr sierpinski() {
  static const SpacePtr space = share(validate_space({"a", "b"}, {{}, {"a"}, {"a", "b"}}));
  return space;
}

SpacePtr two_points() {
  static const SpacePtr space = share(validate_space({"p", "q"}, {{}, {"p"}, {"q"}, {"p", "q"}}));
  return space;
}

SpacePtr point() {
  static const SpacePtr space = share(validate_space({"*"}, {{}, {"*"}}));
  return space;
}

SpacePtr mixed4() {
  static const SpacePtr space = share(generate_from_basis({"a", "b", "c", "d"}, {{"a"}, {"b"}, {"a", "b", "c"}, {"d"}}));
  return space;
}

PresheafPtr p1() {
  static const PresheafPtr s = [] {
    const SpacePtr x = sierpinski();
    const Subset a = set_of(*x, {"a"});
    RawPresheaf raw{x, {{Subset{}, {"*"}}, {a, {"f", "g"}}, {x->whole(), {"h"}}}, {}};
    raw.restrictions.push_back({x->whole(), a, {{"h", "f"}}});
    return share(validate_presheaf(raw));
  }();
  return s;
}

PresheafPtr const2() {
  static const PresheafPtr s = [] {
    const SpacePtr x = two_points();
    RawPresheaf raw{x, {}, {}};
    for (Subset u : x->opens()) raw.sections[u] = {"0", "1"};
    for (Subset u : x->opens()) {
      for (Subset v : x->opens()) {
        if (v != u && v.is_subset_of(u)) raw.restrictions.push_back({u, v, {{"0", "0"}, {"1", "1"}}});
      }
    }
    return share(validate_presheaf(raw));
  }();
  return s;
}

PresheafPtr gluefail() {
  static const PresheafPtr s = [] {
    const SpacePtr x = two_points();
    const Subset p = set_of(*x, {"p"});
    const Subset q = set_of(*x, {"q"});
    RawPresheaf raw{x, {{Subset{}, {"*"}}, {p, {"0", "1"}}, {q, {"0", "1"}}, {x->whole(), {"c"}}}, {}};
    raw.restrictions.push_back({x->whole(), p, {{"c", "0"}}});
    raw.restrictions.push_back({x->whole(), q, {{"c", "0"}}});
    return share(validate_presheaf(raw));
  }();
  return s;
}

PresheafPtr s1fail() {
  static const PresheafPtr s = [] {
    const SpacePtr x = two_points();
    const Subset p = set_of(*x, {"p"});
    const Subset q = set_of(*x, {"q"});
    RawPresheaf raw{x, {{Subset{}, {"*"}}, {p, {"*"}}, {q, {"*"}}, {x->whole(), {"s", "t"}}}, {}};
    return share(validate_presheaf(raw));
  }();
  return s;
}

std::vector<NamedPresheaf> presheaves() {
  return {{"P1", p1()}, {"CONST2", const2()}, {"GLUEFAIL", gluefail()}, {"S1FAIL", s1fail()}};
}

std::vector<NamedSpace> spaces() {
  return {{"SIERP", sierpinski()}, {"DISC2", two_points()}, {"PT", point()}, {"MIXED4", mixed4()}};
}

std::vector<NamedSheaf> sheaves() {
  std::vector<NamedSheaf> out;
  for (const auto& [name, s] : presheaves()) out.emplace_back("Sh(" + name + ")", sheafify(s).sheaf);
  return out;
}

std::vector<std::string> values(std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace finsheaf::fixtures
