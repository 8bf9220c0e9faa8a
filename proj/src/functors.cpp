#include "finsheaf/functors.hpp"

#include <algorithm>
#include <set>

namespace finsheaf {

namespace {

std::string braces(const FiniteSpace& space, Subset u) { return "{" + space.open_name(u) + "}"; }

std::size_t min_open_index(const Presheaf& s, std::size_t x) { return s.open_index(s.base().min_open(x)); }

// Minimal opens of the points of u, without repeats, canonical order.
std::vector<Subset> minimal_cover(const FiniteSpace& space, Subset u) {
  std::vector<Subset> cover;
  u.for_each([&](std::size_t x) { cover.push_back(space.min_open(x)); });
  std::sort(cover.begin(), cover.end());
  cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
  return cover;
}

using Lookup = std::vector<std::map<std::vector<std::size_t>, std::size_t>>;

// Presheaf whose elements over the open with index ui are table[ui], with
// restriction by restricting functions.
PresheafPtr function_presheaf(SpacePtr base, const FiniteSpace& total, const std::vector<std::vector<Section>>& table,
                              Lookup& lookup) {
  const auto& opens = base->opens();
  std::vector<std::vector<std::string>> names(opens.size());
  lookup.assign(opens.size(), {});
  for (std::size_t ui = 0; ui < opens.size(); ++ui) {
    for (std::size_t i = 0; i < table[ui].size(); ++i) {
      names[ui].push_back(section_name(*base, total, table[ui][i]));
      lookup[ui].emplace(table[ui][i].values, i);
    }
  }
  return share(Presheaf::from_tables(base, std::move(names), [&](std::size_t u, std::size_t v) {
    std::vector<std::size_t> map;
    for (const Section& s : table[u]) {
      auto it = lookup[v].find(s.restricted(opens[v]).values);
      if (it == lookup[v].end()) fail(ErrorCode::TheoremViolation, "restriction of a section is not a section");
      map.push_back(it->second);
    }
    return map;
  }));
}

}  // namespace

Germ Sheafification::germ_of(std::size_t z) const {
  const std::size_t x = sheaf->project(z);
  return {x, z - offset[x]};
}

Sheafification sheafify(PresheafPtr s) {
  Sheafification out;
  out.presheaf = s;
  const FiniteSpace& base = s->base();
  const auto& opens = s->opens();
  out.stalks = all_stalks(*s);

  std::vector<std::vector<std::string>> fibers(base.size());
  out.offset.resize(base.size());
  std::size_t running = 0;
  for (std::size_t x = 0; x < base.size(); ++x) {
    out.offset[x] = running;
    for (const auto& e : s->elements_at(min_open_index(*s, x))) fibers[x].push_back(base.name(x) + ":" + e);
    running += fibers[x].size();
  }

  out.rho.resize(opens.size());
  std::set<std::vector<std::size_t>> seen;
  std::vector<Section> sigma;
  for (std::size_t ui = 0; ui < opens.size(); ++ui) {
    for (std::size_t e = 0; e < s->elements_at(ui).size(); ++e) {
      Section t{opens[ui], std::vector<std::size_t>(base.size(), kNone)};
      opens[ui].for_each([&](std::size_t x) {
        const Stalk& st = out.stalks[x];
        t.values[x] = out.total_point(x, st.rep_of_class[st.class_of(ui, e)]);
      });
      if (seen.insert(t.values).second) sigma.push_back(t);
      out.rho[ui].push_back(std::move(t));
    }
  }
  out.sheaf = share(from_fibers_and_sections(s->base_ptr(), fibers, sigma));
  return out;
}

std::string section_name(const FiniteSpace& base, const FiniteSpace& total, const Section& s) {
  std::string out = "{";
  bool first = true;
  s.domain.for_each([&](std::size_t x) {
    out += (first ? "" : ";") + base.name(x) + "=" + total.name(s.values[x]);
    first = false;
  });
  return out + "}";
}

std::size_t SectionPresheaf::index_of(const Section& s) const {
  const std::size_t ui = presheaf->open_index(s.domain);
  auto it = lookup_[ui].find(s.values);
  if (it == lookup_[ui].end()) {
    fail(ErrorCode::UnknownSection, section_name(sheaf->base(), sheaf->total(), s));
  }
  return it->second;
}

SectionPresheaf section_presheaf(SheafPtr sheaf) {
  SectionPresheaf out;
  out.sheaf = sheaf;
  for (Subset u : sheaf->base().opens()) out.sections.push_back(sections(*sheaf, u));
  out.presheaf = function_presheaf(sheaf->base_ptr(), sheaf->total(), out.sections, out.lookup_);
  return out;
}

SheafMorphism counit(SheafPtr sheaf) {
  const SectionPresheaf gamma = section_presheaf(sheaf);
  const Sheafification sh = sheafify(gamma.presheaf);
  std::vector<std::size_t> assignment(sh.sheaf->total().size());
  for (std::size_t z = 0; z < assignment.size(); ++z) {
    const Germ g = sh.germ_of(z);
    assignment[z] = gamma.sections[min_open_index(*gamma.presheaf, g.point)][g.rep].values[g.point];
  }
  SheafMorphism m = validate_sheaf_morphism(sh.sheaf, sheaf, std::move(assignment));
  if (!is_isomorphism(m)) fail(ErrorCode::TheoremViolation, "evaluation of germs is not an isomorphism");
  return m;
}

Completion rho_morphism(PresheafPtr s) {
  Sheafification sh = sheafify(s);
  SectionPresheaf gamma = section_presheaf(sh.sheaf);
  std::vector<std::vector<std::size_t>> components(s->open_count());
  for (std::size_t ui = 0; ui < components.size(); ++ui) {
    for (const Section& t : sh.rho[ui]) components[ui].push_back(gamma.index_of(t));
  }
  PresheafMorphism rho = validate_morphism(s, gamma.presheaf, std::move(components));
  return {std::move(sh), std::move(gamma), std::move(rho)};
}

Factorisation factor_through(const PresheafMorphism& phi) {
  const Presheaf& e = phi.target();
  if (auto f = check_s1(e).failure) fail(ErrorCode::NotComplete, describe(e, *f));
  if (auto f = check_s2(e).failure) fail(ErrorCode::NotComplete, describe(e, *f));
  Completion completion = rho_morphism(phi.source_ptr());
  const Sheafification& sh = completion.sheafification;
  const SectionPresheaf& gamma = completion.sections;
  const FiniteSpace& base = e.base();
  const auto& opens = gamma.presheaf->opens();

  std::vector<std::vector<std::size_t>> components(opens.size());
  for (std::size_t ui = 0; ui < opens.size(); ++ui) {
    const std::vector<Subset> cover = minimal_cover(base, opens[ui]);
    for (const Section& t : gamma.sections[ui]) {
      std::vector<std::size_t> family;
      for (Subset member : cover) {
        // A point whose minimal open is this member.
        std::size_t x = 0;
        while (base.min_open(x) != member) ++x;
        const Germ g = sh.germ_of(t.values[x]);
        family.push_back(phi.component(member)[g.rep]);
      }
      const auto glued = gluings(e, opens[ui], cover, family);
      if (glued.size() != 1) {
        fail(ErrorCode::TheoremViolation, "gluing over " + braces(base, opens[ui]) + " produced " +
                                              std::to_string(glued.size()) + " elements");
      }
      components[ui].push_back(glued.front());
    }
  }
  PresheafMorphism psi = validate_morphism(gamma.presheaf, phi.target_ptr(), std::move(components));
  if (compose(psi, completion.rho).components() != phi.components()) {
    fail(ErrorCode::TheoremViolation, "factorisation does not reproduce the morphism");
  }
  return {std::move(completion), std::move(psi)};
}

std::optional<std::vector<PresheafMorphism>> all_morphisms(PresheafPtr source, PresheafPtr target, double limit) {
  if (!(source->base() == target->base())) fail(ErrorCode::BaseMismatch, "presheaves live over different spaces");
  const std::size_t m = source->open_count();
  double count = 1;
  for (std::size_t ui = 0; ui < m; ++ui) {
    for (std::size_t i = 0; i < source->elements_at(ui).size(); ++i) count *= target->elements_at(ui).size();
  }
  if (count > limit) return std::nullopt;
  std::vector<PresheafMorphism> out;
  if (count == 0) return out;
  std::vector<std::vector<std::size_t>> components(m);
  for (std::size_t ui = 0; ui < m; ++ui) components[ui].assign(source->elements_at(ui).size(), 0);
  while (true) {
    try {
      out.push_back(validate_morphism(source, target, components));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::SquareFails) throw;
    }
    // Odometer step.
    std::size_t ui = 0;
    for (; ui < m; ++ui) {
      auto& c = components[ui];
      std::size_t i = 0;
      for (; i < c.size(); ++i) {
        if (++c[i] < target->elements_at(ui).size()) break;
        c[i] = 0;
      }
      if (i < c.size()) break;
    }
    if (ui == m) break;
  }
  return out;
}

SheafMorphism sheafify_morphism(const PresheafMorphism& phi) {
  const Sheafification a = sheafify(phi.source_ptr());
  const Sheafification b = sheafify(phi.target_ptr());
  std::vector<std::size_t> assignment(a.sheaf->total().size());
  for (std::size_t z = 0; z < assignment.size(); ++z) {
    const Germ g = a.germ_of(z);
    assignment[z] = b.total_point(g.point, phi.component_at(min_open_index(phi.source(), g.point))[g.rep]);
  }
  return validate_sheaf_morphism(a.sheaf, b.sheaf, std::move(assignment));
}

PresheafMorphism section_morphism(const SheafMorphism& phi) {
  const SectionPresheaf gs = section_presheaf(phi.source_ptr());
  const SectionPresheaf gt = section_presheaf(phi.target_ptr());
  std::vector<std::vector<std::size_t>> components(gs.sections.size());
  for (std::size_t ui = 0; ui < components.size(); ++ui) {
    for (const Section& s : gs.sections[ui]) {
      Section t{s.domain, std::vector<std::size_t>(s.values.size(), kNone)};
      s.domain.for_each([&](std::size_t x) { t.values[x] = phi(s.values[x]); });
      components[ui].push_back(gt.index_of(t));
    }
  }
  return validate_morphism(gs.presheaf, gt.presheaf, std::move(components));
}

namespace {

std::vector<std::size_t> preimage_indices(const ContinuousMap& f, const Presheaf& s) {
  if (!(f.domain() == s.base())) fail(ErrorCode::BaseMismatch, "map domain is not the presheaf base");
  std::vector<std::size_t> pre;
  for (Subset v : f.codomain().opens()) pre.push_back(s.open_index(f.preimage(v)));
  return pre;
}

}  // namespace

Presheaf pushout_presheaf(const ContinuousMap& f, const Presheaf& s) {
  const std::vector<std::size_t> pre = preimage_indices(f, s);
  std::vector<std::vector<std::string>> elements;
  for (std::size_t i : pre) elements.push_back(s.elements_at(i));
  return Presheaf::from_tables(f.codomain_ptr(), std::move(elements),
                               [&](std::size_t u, std::size_t v) { return s.restriction_at(pre[u], pre[v]); });
}

PresheafMorphism pushout_morphism(const ContinuousMap& f, const PresheafMorphism& phi) {
  const std::vector<std::size_t> pre = preimage_indices(f, phi.source());
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t i : pre) components.push_back(phi.component_at(i));
  return validate_morphism(share(pushout_presheaf(f, phi.source())), share(pushout_presheaf(f, phi.target())),
                           std::move(components));
}

EtaleSheaf pushforward_sheaf(const ContinuousMap& f, SheafPtr sheaf) {
  const SectionPresheaf gamma = section_presheaf(std::move(sheaf));
  return *sheafify(share(pushout_presheaf(f, *gamma.presheaf))).sheaf;
}

Pullback pullback_sheaf(const ContinuousMap& f, SheafPtr sheaf) {
  if (!(f.codomain() == sheaf->base())) fail(ErrorCode::BaseMismatch, "map codomain is not the sheaf base");
  const FiniteSpace& x_space = f.domain();
  const FiniteSpace& total = sheaf->total();
  Pullback out;
  std::vector<std::string> names;
  std::vector<std::size_t> proj;
  for (std::size_t x = 0; x < x_space.size(); ++x) {
    for (std::size_t z : sheaf->fiber_at(f(x))) {
      out.pairs.emplace_back(x, z);
      names.push_back("[" + x_space.name(x) + "|" + total.name(z) + "]");
      proj.push_back(x);
    }
  }
  if (names.size() > kMaxPoints) fail(ErrorCode::TooLarge, std::to_string(names.size()) + " points in fiber product");
  // Smallest product rectangle around each pair, cut down to the fiber product.
  std::vector<Subset> basis;
  for (const auto& [x, z] : out.pairs) {
    Subset rect;
    for (std::size_t k = 0; k < out.pairs.size(); ++k) {
      if (x_space.min_open(x).contains(out.pairs[k].first) && total.min_open(z).contains(out.pairs[k].second)) {
        rect = rect.with(k);
      }
    }
    basis.push_back(rect);
  }
  auto space = share(FiniteSpace::from_basis(std::move(names), basis));
  out.sheaf = share(validate_etale(space, f.domain_ptr(), ContinuousMap::validate(space, f.domain_ptr(), std::move(proj))));
  return out;
}

RelativeSections pullback_via_presheaf(const ContinuousMap& f, SheafPtr sheaf) {
  if (!(f.codomain() == sheaf->base())) fail(ErrorCode::BaseMismatch, "map codomain is not the sheaf base");
  const FiniteSpace& x_space = f.domain();
  std::vector<std::vector<std::size_t>> candidates(x_space.size());
  for (std::size_t x = 0; x < x_space.size(); ++x) candidates[x] = sheaf->fiber_at(f(x));
  RelativeSections out;
  for (Subset u : x_space.opens()) out.lifts.push_back(continuous_lifts(x_space, u, sheaf->total(), candidates));
  Lookup lookup;
  out.presheaf = function_presheaf(f.domain_ptr(), sheaf->total(), out.lifts, lookup);
  out.sheafification = sheafify(out.presheaf);
  return out;
}

SheafMorphism pullback_comparison(const RelativeSections& via, const Pullback& pullback) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t k = 0; k < pullback.pairs.size(); ++k) index.emplace(pullback.pairs[k], k);
  const Sheafification& sh = via.sheafification;
  std::vector<std::size_t> assignment(sh.sheaf->total().size());
  for (std::size_t z = 0; z < assignment.size(); ++z) {
    const Germ g = sh.germ_of(z);
    const Section& t = via.lifts[min_open_index(*via.presheaf, g.point)][g.rep];
    auto it = index.find({g.point, t.values[g.point]});
    if (it == index.end()) fail(ErrorCode::TheoremViolation, "lift value outside the fiber product");
    assignment[z] = it->second;
  }
  return validate_sheaf_morphism(sh.sheaf, pullback.sheaf, std::move(assignment));
}

SheafMorphism sheafify_restriction_comparison(PresheafPtr s, Subset a) {
  const Sheafification left = sheafify(share(restrict_presheaf(*s, a)));
  const RestrictedSheaf right = restrict_sheaf(*sheafify(s).sheaf, a);
  const FiniteSpace& from = left.sheaf->total();
  std::vector<std::size_t> assignment(from.size());
  for (std::size_t z = 0; z < from.size(); ++z) {
    auto w = right.sheaf->total().find(from.name(z));
    if (!w) fail(ErrorCode::TheoremViolation, "no germ named " + from.name(z) + " after restriction");
    assignment[z] = *w;
  }
  return validate_sheaf_morphism(left.sheaf, right.sheaf, std::move(assignment));
}

std::optional<std::string> presheaf_difference(const Presheaf& a, const Presheaf& b) {
  if (!(a.base() == b.base())) return "base spaces differ";
  const auto& opens = a.opens();
  for (std::size_t ui = 0; ui < opens.size(); ++ui) {
    if (a.elements_at(ui) != b.elements_at(ui)) return "elements over " + braces(a.base(), opens[ui]) + " differ";
  }
  for (std::size_t ui = 0; ui < opens.size(); ++ui) {
    for (std::size_t vi = 0; vi < opens.size(); ++vi) {
      if (!opens[vi].is_subset_of(opens[ui])) continue;
      if (a.restriction_at(ui, vi) != b.restriction_at(ui, vi)) {
        return "restriction " + braces(a.base(), opens[ui]) + "->" + braces(a.base(), opens[vi]) + " differs";
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> section_restriction_difference(SheafPtr sheaf, Subset a) {
  const SectionPresheaf left = section_presheaf(restrict_sheaf(*sheaf, a).sheaf);
  const Presheaf right = restrict_presheaf(*section_presheaf(sheaf).presheaf, a);
  return presheaf_difference(*left.presheaf, right);
}

std::optional<std::string> sheaf_stalk_defect(const SectionPresheaf& gamma, std::size_t x) {
  const Presheaf& p = *gamma.presheaf;
  const FiniteSpace& base = p.base();
  const Stalk st = stalk(p, x);
  std::vector<std::size_t> value(st.size(), kNone);
  for (std::size_t c = 0; c < st.size(); ++c) {
    for (const TaggedElement& m : st.limit.members(c)) {
      const std::size_t z = gamma.sections[st.neighbourhoods[m.index]][m.element].values[x];
      if (value[c] == kNone) value[c] = z;
      if (value[c] != z) return "germ evaluation at " + base.name(x) + " is not well defined";
    }
  }
  std::vector<std::size_t> sorted = value;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return "two germs at " + base.name(x) + " evaluate to the same point";
  }
  if (sorted != gamma.sheaf->fiber_at(x)) return "germ evaluation at " + base.name(x) + " misses the fiber";
  return std::nullopt;
}

std::optional<std::string> presheaf_stalk_defect(const Completion& completion, std::size_t x) {
  const Stalk& from = completion.sheafification.stalks[x];
  const Stalk to = stalk(*completion.sections.presheaf, x);
  const std::string where = completion.sheafification.presheaf->base().name(x);
  std::vector<std::size_t> image(from.size(), kNone);
  for (std::size_t c = 0; c < from.size(); ++c) {
    for (const TaggedElement& m : from.limit.members(c)) {
      const std::size_t ui = from.neighbourhoods[m.index];
      const std::size_t d = to.class_of(ui, completion.rho.component_at(ui)[m.element]);
      if (image[c] == kNone) image[c] = d;
      if (image[c] != d) return "germ map at " + where + " is not well defined";
    }
  }
  std::vector<bool> hit(to.size(), false);
  for (std::size_t d : image) {
    if (hit[d]) return "germ map at " + where + " is not injective";
    hit[d] = true;
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) return "germ map at " + where + " is not onto";
  return std::nullopt;
}

}  // namespace finsheaf
