#include "finsheaf/presheaf.hpp"

#include <algorithm>
#include <numeric>

namespace finsheaf {

namespace {

std::string braces(const FiniteSpace& space, Subset u) { return "{" + space.open_name(u) + "}"; }

}  // namespace

Presheaf::Presheaf(SpacePtr base, std::vector<std::vector<std::string>> elements)
    : base_(std::move(base)), elements_(std::move(elements)) {
  const auto& opens = base_->opens();
  if (elements_.size() != opens.size()) fail(ErrorCode::MissingSectionSet, "one section set per open required");
  for (std::size_t i = 0; i < opens.size(); ++i) open_index_.emplace(opens[i], i);
  element_index_.resize(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    for (std::size_t e = 0; e < elements_[i].size(); ++e) {
      if (!element_index_[i].emplace(elements_[i][e], e).second) {
        fail(ErrorCode::DuplicateElement, braces(*base_, opens[i]) + " " + elements_[i][e]);
      }
    }
  }
  maps_.resize(elements_.size() * elements_.size());
}

void Presheaf::verify_laws() const {
  const auto& opens = this->opens();
  const std::size_t m = opens.size();
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (!opens[v].is_subset_of(opens[u])) continue;
      const auto& map = restriction_at(u, v);
      if (map.size() != elements_[u].size()) {
        fail(ErrorCode::MissingRestriction, braces(*base_, opens[u]) + " -> " + braces(*base_, opens[v]));
      }
      for (std::size_t x : map) {
        if (x >= elements_[v].size()) fail(ErrorCode::UnknownSection, "restriction leaves " + braces(*base_, opens[v]));
      }
    }
    const auto& id = restriction_at(u, u);
    for (std::size_t s = 0; s < id.size(); ++s) {
      if (id[s] != s) fail(ErrorCode::IdentityViolated, braces(*base_, opens[u]));
    }
  }
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (v == u || !opens[v].is_subset_of(opens[u])) continue;
      for (std::size_t w = 0; w < m; ++w) {
        if (w == v || !opens[w].is_subset_of(opens[v])) continue;
        const auto& uv = restriction_at(u, v);
        const auto& vw = restriction_at(v, w);
        const auto& uw = restriction_at(u, w);
        for (std::size_t s = 0; s < uv.size(); ++s) {
          if (vw[uv[s]] != uw[s]) {
            fail(ErrorCode::CompositionViolated, braces(*base_, opens[u]) + ", " + braces(*base_, opens[v]) + ", " +
                                                     braces(*base_, opens[w]) + ", " + elements_[u][s]);
          }
        }
      }
    }
  }
}

std::size_t Presheaf::open_index(Subset u) const {
  auto it = open_index_.find(u);
  if (it == open_index_.end()) fail(ErrorCode::NotOpen, braces(*base_, u));
  return it->second;
}

std::size_t Presheaf::element_index(Subset u, std::string_view name) const {
  const std::size_t ui = open_index(u);
  auto it = element_index_[ui].find(std::string(name));
  if (it == element_index_[ui].end()) fail(ErrorCode::UnknownSection, braces(*base_, u) + " " + std::string(name));
  return it->second;
}

const std::vector<std::size_t>& Presheaf::restriction(Subset u, Subset v) const {
  if (!v.is_subset_of(u)) fail(ErrorCode::NotASubset, braces(*base_, v) + " in " + braces(*base_, u));
  return restriction_at(open_index(u), open_index(v));
}

Presheaf validate_presheaf(const RawPresheaf& raw) {
  const FiniteSpace& base = *raw.base;
  const auto& opens = base.opens();
  const std::size_t m = opens.size();
  std::unordered_map<Subset, std::size_t> index;
  for (std::size_t i = 0; i < m; ++i) index.emplace(opens[i], i);
  auto index_of = [&](Subset u) {
    auto it = index.find(u);
    if (it == index.end()) fail(ErrorCode::NotOpen, braces(base, u));
    return it->second;
  };

  std::vector<std::vector<std::string>> elements(m);
  std::vector<bool> present(m, false);
  for (const auto& [u, elems] : raw.sections) {
    const std::size_t ui = index_of(u);
    elements[ui] = elems;
    present[ui] = true;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!present[i]) fail(ErrorCode::MissingSectionSet, braces(base, opens[i]));
  }
  std::vector<std::unordered_map<std::string, std::size_t>> element_pos(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t e = 0; e < elements[i].size(); ++e) {
      if (!element_pos[i].emplace(elements[i][e], e).second) {
        fail(ErrorCode::DuplicateElement, braces(base, opens[i]) + " " + elements[i][e]);
      }
    }
  }

  auto pair_name = [&](std::size_t u, std::size_t v) { return braces(base, opens[u]) + " -> " + braces(base, opens[v]); };

  // Maps as listed in the input, converted to positions.
  std::vector<std::optional<std::vector<std::size_t>>> given(m * m);
  for (const auto& r : raw.restrictions) {
    const std::size_t u = index_of(r.from);
    const std::size_t v = index_of(r.to);
    if (!r.to.is_subset_of(r.from)) fail(ErrorCode::NotASubset, pair_name(u, v));
    std::vector<std::size_t> map(elements[u].size(), kNone);
    for (const auto& [from, to] : r.values) {
      auto s = element_pos[u].find(from);
      if (s == element_pos[u].end()) fail(ErrorCode::UnknownSection, braces(base, opens[u]) + " " + from);
      auto t = element_pos[v].find(to);
      if (t == element_pos[v].end()) fail(ErrorCode::UnknownSection, braces(base, opens[v]) + " " + to);
      map[s->second] = t->second;
    }
    for (std::size_t s = 0; s < map.size(); ++s) {
      if (map[s] == kNone) fail(ErrorCode::MissingRestriction, pair_name(u, v) + " at " + elements[u][s]);
    }
    auto& slot = given[u * m + v];
    if (slot && *slot != map) {
      for (std::size_t s = 0; s < map.size(); ++s) {
        if ((*slot)[s] != map[s]) {
          fail(ErrorCode::PathDependent, pair_name(u, v) + " " + elements[u][s] + " -> " + elements[v][(*slot)[s]] +
                                             " vs " + elements[v][map[s]]);
        }
      }
    }
    slot = std::move(map);
  }
  for (std::size_t u = 0; u < m; ++u) {
    if (const auto& id = given[u * m + u]) {
      for (std::size_t s = 0; s < id->size(); ++s) {
        if ((*id)[s] != s) fail(ErrorCode::IdentityViolated, braces(base, opens[u]));
      }
    }
  }

  // Covering pairs of the inclusion order.
  std::vector<std::vector<std::size_t>> children(m);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (v == u || !opens[v].is_subset_of(opens[u])) continue;
      bool covered = true;
      for (std::size_t w = 0; w < m && covered; ++w) {
        covered = !(w != u && w != v && opens[v].is_subset_of(opens[w]) && opens[w].is_subset_of(opens[u]));
      }
      if (covered) children[u].push_back(v);
    }
  }

  std::vector<std::vector<std::size_t>> full(m * m);
  for (std::size_t u = 0; u < m; ++u) {
    full[u * m + u].resize(elements[u].size());
    std::iota(full[u * m + u].begin(), full[u * m + u].end(), 0);
  }
  // Opens are in canonical order (by size), so every proper subset of U is
  // finished before U.
  for (std::size_t u = 0; u < m; ++u) {
    std::vector<std::vector<std::size_t>> step(m);
    for (std::size_t c : children[u]) {
      if (const auto& g = given[u * m + c]) {
        step[c] = *g;
      } else if (elements[u].empty() || elements[c].size() == 1) {
        // The only function there is.
        step[c].assign(elements[u].size(), 0);
      } else {
        fail(ErrorCode::MissingRestriction, pair_name(u, c));
      }
    }
    for (std::size_t v = 0; v < m; ++v) {
      if (v == u || !opens[v].is_subset_of(opens[u])) continue;
      std::optional<std::size_t> via;
      std::vector<std::size_t> composite;
      for (std::size_t c : children[u]) {
        if (!opens[v].is_subset_of(opens[c])) continue;
        std::vector<std::size_t> candidate(elements[u].size());
        for (std::size_t s = 0; s < candidate.size(); ++s) candidate[s] = full[c * m + v][step[c][s]];
        if (!via) {
          via = c;
          composite = std::move(candidate);
          continue;
        }
        for (std::size_t s = 0; s < candidate.size(); ++s) {
          if (candidate[s] != composite[s]) {
            fail(ErrorCode::PathDependent, pair_name(u, v) + " " + elements[u][s] + " -> " +
                                               elements[v][composite[s]] + " via " + braces(base, opens[*via]) +
                                               " vs " + elements[v][candidate[s]] + " via " + braces(base, opens[c]));
          }
        }
      }
      if (const auto& g = given[u * m + v]; g && *via != v) {
        for (std::size_t s = 0; s < composite.size(); ++s) {
          if ((*g)[s] != composite[s]) {
            fail(ErrorCode::CompositionViolated, braces(base, opens[u]) + ", " + braces(base, opens[*via]) + ", " +
                                                     braces(base, opens[v]) + ", " + elements[u][s]);
          }
        }
      }
      full[u * m + v] = std::move(composite);
    }
  }

  return Presheaf::from_tables(raw.base, std::move(elements),
                               [&](std::size_t u, std::size_t v) { return full[u * m + v]; });
}

Presheaf restrict_presheaf(const Presheaf& s, Subset a) {
  const FiniteSpace& base = s.base();
  if (!base.is_open(a)) fail(ErrorCode::NotOpen, braces(base, a));
  Subspace sub = subspace(base, a);
  auto space = share(std::move(sub.space));
  const auto& opens = space->opens();
  std::vector<std::size_t> parent_index(opens.size());
  std::vector<std::vector<std::string>> elements;
  for (std::size_t i = 0; i < opens.size(); ++i) {
    Subset lifted;
    opens[i].for_each([&](std::size_t p) { lifted = lifted.with(sub.to_parent[p]); });
    parent_index[i] = s.open_index(lifted);
    elements.push_back(s.elements_at(parent_index[i]));
  }
  return Presheaf::from_tables(space, std::move(elements), [&](std::size_t u, std::size_t v) {
    return s.restriction_at(parent_index[u], parent_index[v]);
  });
}

std::size_t Stalk::class_of(std::size_t ui, std::size_t s) const {
  if (ui >= position.size() || position[ui] == kNone) fail(ErrorCode::PointNotInOpen, "open index " + std::to_string(ui));
  return limit.canonical(position[ui], s);
}

Stalk stalk(const Presheaf& s, std::size_t point) {
  const FiniteSpace& base = s.base();
  if (point >= base.size()) fail(ErrorCode::UnknownPoint, "point index " + std::to_string(point));
  const auto& opens = s.opens();

  Stalk st;
  st.point = point;
  st.position.assign(opens.size(), kNone);
  RawDirectedSystem raw;
  for (std::size_t i = 0; i < opens.size(); ++i) {
    if (!opens[i].contains(point)) continue;
    st.position[i] = st.neighbourhoods.size();
    st.neighbourhoods.push_back(i);
    raw.indices.push_back(braces(base, opens[i]));
    raw.carriers.push_back(s.elements_at(i));
  }
  // U <= V when V is a subset of U: smaller neighbourhoods come later.
  for (std::size_t a = 0; a < st.neighbourhoods.size(); ++a) {
    for (std::size_t b = 0; b < st.neighbourhoods.size(); ++b) {
      const std::size_t u = st.neighbourhoods[a];
      const std::size_t v = st.neighbourhoods[b];
      if (a != b && opens[v].is_subset_of(opens[u])) {
        raw.order.emplace_back(a, b);
        raw.maps[{a, b}] = s.restriction_at(u, v);
      }
    }
  }
  st.system = validate_system(std::move(raw));
  st.limit = colimit(st.system);

  // The minimal open is the top of the neighbourhood order, so its canonical
  // map must be a bijection onto the classes.
  const std::size_t top = s.open_index(base.min_open(point));
  const std::size_t top_pos = st.position[top];
  const std::size_t reps = s.elements_at(top).size();
  st.class_of_rep.resize(reps);
  st.rep_of_class.assign(st.limit.class_count(), kNone);
  for (std::size_t e = 0; e < reps; ++e) {
    const std::size_t c = st.limit.canonical(top_pos, e);
    if (st.rep_of_class[c] != kNone) fail(ErrorCode::TheoremViolation, "stalk at " + base.name(point) + " not injective on S(min open)");
    st.class_of_rep[e] = c;
    st.rep_of_class[c] = e;
  }
  for (std::size_t c = 0; c < st.rep_of_class.size(); ++c) {
    if (st.rep_of_class[c] == kNone) fail(ErrorCode::TheoremViolation, "stalk at " + base.name(point) + " not onto");
  }
  return st;
}

Stalk stalk(const Presheaf& s, std::string_view point) { return stalk(s, s.base().index_of(point)); }

std::vector<Stalk> all_stalks(const Presheaf& s) {
  std::vector<Stalk> out;
  for (std::size_t x = 0; x < s.base().size(); ++x) out.push_back(stalk(s, x));
  return out;
}

Germ germ(const Presheaf& s, const Stalk& st, Subset u, std::size_t element) {
  const std::size_t ui = s.open_index(u);
  if (!u.contains(st.point)) fail(ErrorCode::PointNotInOpen, s.base().name(st.point) + " not in " + braces(s.base(), u));
  if (element >= s.elements_at(ui).size()) fail(ErrorCode::UnknownSection, "element index " + std::to_string(element));
  return {st.point, st.rep_of_class[st.class_of(ui, element)]};
}

Germ germ(const Presheaf& s, Subset u, std::string_view element, std::string_view point) {
  const std::size_t x = s.base().index_of(point);
  if (!u.contains(x)) fail(ErrorCode::PointNotInOpen, std::string(point) + " not in " + braces(s.base(), u));
  const std::size_t e = s.element_index(u, element);
  return germ(s, stalk(s, x), u, e);
}

// ---------------------------------------------------------------------------

PresheafMorphism validate_morphism(PresheafPtr source, PresheafPtr target,
                                   std::vector<std::vector<std::size_t>> components) {
  if (!(source->base() == target->base())) fail(ErrorCode::BaseMismatch, "presheaves live on different spaces");
  const auto& opens = source->opens();
  const FiniteSpace& base = source->base();
  if (components.size() != opens.size()) fail(ErrorCode::InvalidFormat, "one component per open required");
  for (std::size_t u = 0; u < opens.size(); ++u) {
    if (components[u].size() != source->elements_at(u).size()) {
      fail(ErrorCode::InvalidFormat, "component at " + braces(base, opens[u]) + " is not total");
    }
    for (std::size_t v : components[u]) {
      if (v >= target->elements_at(u).size()) fail(ErrorCode::UnknownSection, "component at " + braces(base, opens[u]));
    }
  }
  for (std::size_t u = 0; u < opens.size(); ++u) {
    for (std::size_t v = 0; v < opens.size(); ++v) {
      if (v == u || !opens[v].is_subset_of(opens[u])) continue;
      const auto& src = source->restriction_at(u, v);
      const auto& tgt = target->restriction_at(u, v);
      for (std::size_t s = 0; s < src.size(); ++s) {
        if (tgt[components[u][s]] != components[v][src[s]]) {
          fail(ErrorCode::SquareFails,
               braces(base, opens[u]) + ", " + braces(base, opens[v]) + ", " + source->elements_at(u)[s]);
        }
      }
    }
  }
  PresheafMorphism m;
  m.source_ = std::move(source);
  m.target_ = std::move(target);
  m.components_ = std::move(components);
  return m;
}

PresheafMorphism validate_morphism(PresheafPtr source, PresheafPtr target,
                                   const std::map<Subset, std::map<std::string, std::string>>& components) {
  std::vector<std::vector<std::size_t>> table(source->open_count());
  for (std::size_t u = 0; u < table.size(); ++u) table[u].assign(source->elements_at(u).size(), kNone);
  for (const auto& [u, map] : components) {
    const std::size_t ui = source->open_index(u);
    for (const auto& [from, to] : map) {
      table[ui][source->element_index(u, from)] = target->element_index(u, to);
    }
  }
  for (std::size_t u = 0; u < table.size(); ++u) {
    for (std::size_t s = 0; s < table[u].size(); ++s) {
      if (table[u][s] == kNone) {
        fail(ErrorCode::InvalidFormat, "no image for " + source->elements_at(u)[s] + " at " +
                                           braces(source->base(), source->opens()[u]));
      }
    }
  }
  return validate_morphism(std::move(source), std::move(target), std::move(table));
}

PresheafMorphism identity_morphism(PresheafPtr s) {
  std::vector<std::vector<std::size_t>> table(s->open_count());
  for (std::size_t u = 0; u < table.size(); ++u) {
    table[u].resize(s->elements_at(u).size());
    std::iota(table[u].begin(), table[u].end(), 0);
  }
  return validate_morphism(s, s, std::move(table));
}

PresheafMorphism compose(const PresheafMorphism& psi, const PresheafMorphism& phi) {
  if (!(phi.target() == psi.source())) fail(ErrorCode::BaseMismatch, "morphisms are not composable");
  std::vector<std::vector<std::size_t>> table(phi.components().size());
  for (std::size_t u = 0; u < table.size(); ++u) {
    for (std::size_t v : phi.component_at(u)) table[u].push_back(psi.component_at(u)[v]);
  }
  return validate_morphism(phi.source_ptr(), psi.target_ptr(), std::move(table));
}

MorphismClass classify_morphism(const PresheafMorphism& m) {
  MorphismClass out{true, true, true};
  for (std::size_t u = 0; u < m.components().size(); ++u) {
    const auto& comp = m.component_at(u);
    std::vector<bool> hit(m.target().elements_at(u).size(), false);
    for (std::size_t v : comp) {
      if (hit[v]) out.injective = false;
      hit[v] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) out.surjective = false;
  }
  out.isomorphism = out.injective && out.surjective;
  return out;
}

}  // namespace finsheaf
