#include "finsheaf/dirlimit.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace finsheaf {

DirectedSystem validate_system(RawDirectedSystem raw) {
  const std::size_t n = raw.indices.size();
  if (raw.carriers.size() != n) fail(ErrorCode::InvalidFormat, "one carrier per index required");

  DirectedSystem sys;
  sys.indices_ = std::move(raw.indices);
  sys.carriers_ = std::move(raw.carriers);
  sys.leq_.assign(n * n, false);
  sys.maps_.assign(n * n, {});
  for (std::size_t a = 0; a < n; ++a) sys.leq_[a * n + a] = true;
  for (auto [a, b] : raw.order) {
    if (a >= n || b >= n) fail(ErrorCode::InvalidFormat, "order mentions an unknown index");
    sys.leq_[a * n + b] = true;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (sys.leq(a, b) && sys.leq(b, c) && !sys.leq(a, c)) {
          fail(ErrorCode::NotAPreorder, sys.indices_[a] + " <= " + sys.indices_[b] + " <= " + sys.indices_[c]);
        }
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      bool bounded = false;
      for (std::size_t c = 0; c < n && !bounded; ++c) bounded = sys.leq(a, c) && sys.leq(b, c);
      if (!bounded) fail(ErrorCode::NotDirected, sys.indices_[a] + ", " + sys.indices_[b]);
    }
  }

  for (auto& [key, map] : raw.maps) {
    const auto [a, b] = key;
    if (a >= n || b >= n || !sys.leq(a, b)) fail(ErrorCode::InvalidFormat, "map given for an unrelated pair");
    if (map.size() != sys.carriers_[a].size()) fail(ErrorCode::InvalidFormat, "map is not total");
    for (std::size_t v : map) {
      if (v >= sys.carriers_[b].size()) fail(ErrorCode::InvalidFormat, "map leaves its target carrier");
    }
    if (a == b) {
      for (std::size_t x = 0; x < map.size(); ++x) {
        if (map[x] != x) fail(ErrorCode::IdentityViolated, sys.indices_[a]);
      }
    }
    sys.maps_[a * n + b] = std::move(map);
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!sys.leq(a, b) || raw.maps.contains({a, b})) continue;
      if (a != b) fail(ErrorCode::MissingMap, sys.indices_[a] + " -> " + sys.indices_[b]);
      sys.maps_[a * n + a].resize(sys.carriers_[a].size());
      std::iota(sys.maps_[a * n + a].begin(), sys.maps_[a * n + a].end(), 0);
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!sys.leq(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (!sys.leq(b, c)) continue;
        const auto& ab = sys.transition(a, b);
        const auto& bc = sys.transition(b, c);
        const auto& ac = sys.transition(a, c);
        for (std::size_t x = 0; x < ab.size(); ++x) {
          if (bc[ab[x]] != ac[x]) {
            fail(ErrorCode::CompositionViolated, sys.indices_[a] + ", " + sys.indices_[b] + ", " + sys.indices_[c] +
                                                     ", " + sys.carriers_[a][x]);
          }
        }
      }
    }
  }
  return sys;
}

DirectLimit colimit(const DirectedSystem& system) {
  const std::size_t n = system.index_count();
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t a = 0; a < n; ++a) offset[a + 1] = offset[a] + system.carrier(a).size();
  std::vector<std::size_t> parent(offset[n]);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  // x in E_a is related to f_{c,a}(x) in E_c for every c >= a; these pairs
  // generate the eventual-agreement relation, closed here by union-find.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t c = 0; c < n; ++c) {
      if (!system.leq(a, c)) continue;
      const auto& f = system.transition(a, c);
      for (std::size_t x = 0; x < f.size(); ++x) {
        const std::size_t r1 = root(offset[a] + x);
        const std::size_t r2 = root(offset[c] + f[x]);
        if (r1 != r2) parent[std::max(r1, r2)] = std::min(r1, r2);
      }
    }
  }

  DirectLimit lim;
  std::vector<std::size_t> slot(parent.size(), parent.size());
  lim.class_of_.resize(n);
  // Tagged elements are visited in lexicographic order, so the first member
  // of each class is its least element and classes come out sorted by it.
  for (std::size_t a = 0; a < n; ++a) {
    lim.class_of_[a].resize(system.carrier(a).size());
    for (std::size_t x = 0; x < system.carrier(a).size(); ++x) {
      const std::size_t r = root(offset[a] + x);
      if (slot[r] == parent.size()) {
        slot[r] = lim.classes_.size();
        lim.classes_.emplace_back();
      }
      lim.classes_[slot[r]].push_back({a, x});
      lim.class_of_[a][x] = slot[r];
    }
  }
  return lim;
}

void check_cocone(const DirectedSystem& system, const Cocone& cocone) {
  const std::size_t n = system.index_count();
  if (cocone.legs.size() != n) fail(ErrorCode::InvalidFormat, "one cocone leg per index required");
  for (std::size_t a = 0; a < n; ++a) {
    if (cocone.legs[a].size() != system.carrier(a).size()) fail(ErrorCode::InvalidFormat, "cocone leg is not total");
    for (std::size_t v : cocone.legs[a]) {
      if (v >= cocone.target_size) fail(ErrorCode::InvalidFormat, "cocone leg leaves the target");
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!system.leq(a, b)) continue;
      const auto& f = system.transition(a, b);
      for (std::size_t x = 0; x < f.size(); ++x) {
        if (cocone.legs[b][f[x]] != cocone.legs[a][x]) {
          fail(ErrorCode::NotACocone,
               system.index_name(a) + ", " + system.index_name(b) + ", " + system.carrier(a)[x]);
        }
      }
    }
  }
}

std::vector<std::size_t> universal_map(const DirectedSystem& system, const DirectLimit& limit, const Cocone& cocone) {
  check_cocone(system, cocone);
  std::vector<std::size_t> u(limit.class_count());
  for (std::size_t c = 0; c < u.size(); ++c) {
    const TaggedElement rep = limit.representative(c);
    u[c] = cocone.legs[rep.index][rep.element];
  }
  return u;
}

SurjectivityVerdict check_surjectivity_criterion(const DirectedSystem& system, const Cocone& cocone,
                                                 const DirectLimit& limit, const std::vector<std::size_t>& u) {
  (void)limit;
  std::vector<bool> hit_by_u(cocone.target_size, false);
  for (std::size_t v : u) hit_by_u[v] = true;
  std::vector<bool> hit_by_legs(cocone.target_size, false);
  for (std::size_t a = 0; a < system.index_count(); ++a) {
    for (std::size_t v : cocone.legs[a]) hit_by_legs[v] = true;
  }
  if (hit_by_u != hit_by_legs) fail(ErrorCode::TheoremViolation, "surjectivity criterion disagrees with u");
  for (std::size_t v = 0; v < hit_by_u.size(); ++v) {
    if (!hit_by_u[v]) return {false, v};
  }
  return {true, std::nullopt};
}

InjectivityVerdict check_injectivity_criterion(const DirectedSystem& system, const Cocone& cocone,
                                               const DirectLimit& limit, const std::vector<std::size_t>& u) {
  (void)limit;
  InjectivityVerdict direct{true, std::nullopt};
  std::map<std::size_t, std::size_t> first_class;
  for (std::size_t c = 0; c < u.size() && direct.injective; ++c) {
    auto [it, inserted] = first_class.emplace(u[c], c);
    if (!inserted) direct = {false, std::make_pair(it->second, c)};
  }

  bool criterion = true;
  const std::size_t n = system.index_count();
  for (std::size_t a = 0; a < n && criterion; ++a) {
    const auto& leg = cocone.legs[a];
    for (std::size_t x = 0; x < leg.size() && criterion; ++x) {
      for (std::size_t y = x + 1; y < leg.size() && criterion; ++y) {
        if (leg[x] != leg[y]) continue;
        bool merges = false;
        for (std::size_t b = 0; b < n && !merges; ++b) {
          merges = system.leq(a, b) && system.transition(a, b)[x] == system.transition(a, b)[y];
        }
        criterion = merges;
      }
    }
  }
  if (criterion != direct.injective) fail(ErrorCode::TheoremViolation, "injectivity criterion disagrees with u");
  return direct;
}

std::string dump(const DirectedSystem& system, const DirectLimit& limit) {
  auto tag = [&](TaggedElement t) { return system.index_name(t.index) + ":" + system.carrier(t.index)[t.element]; };
  std::vector<std::string> lines;
  for (std::size_t c = 0; c < limit.class_count(); ++c) {
    std::vector<std::string> members;
    for (TaggedElement t : limit.members(c)) members.push_back(tag(t));
    std::sort(members.begin(), members.end());
    std::string line = "{" + tag(limit.representative(c)) + "} <- [";
    for (std::size_t i = 0; i < members.size(); ++i) line += (i ? ", " : "") + members[i];
    lines.push_back(line + "]");
  }
  std::sort(lines.begin(), lines.end());
  std::ostringstream out;
  for (const auto& l : lines) out << l << '\n';
  return out.str();
}

}  // namespace finsheaf
