#include "finsheaf/etale.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace finsheaf {

namespace {

std::string braces(const FiniteSpace& space, Subset u) { return "{" + space.open_name(u) + "}"; }

double factorial(std::size_t n) {
  double f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

}  // namespace

bool is_local_homeomorphism_on(const ContinuousMap& p, Subset b) {
  const FiniteSpace& total = p.domain();
  const FiniteSpace& base = p.codomain();
  if (!total.is_open(b)) return false;
  const Subset img = p.image(b);
  if (img.size() != b.size()) return false;
  if (!base.is_open(img)) return false;
  // With b and its image open, subspace minimal opens are the ambient ones;
  // the inverse is continuous iff p maps minimal opens onto minimal opens.
  bool homeo = true;
  b.for_each([&](std::size_t w) { homeo = homeo && p.image(total.min_open(w)) == base.min_open(p(w)); });
  return homeo;
}

std::optional<Subset> local_homeomorphism_witness(const ContinuousMap& p, std::size_t z) {
  const FiniteSpace& total = p.domain();
  const FiniteSpace& base = p.codomain();
  const auto& base_opens = base.opens();
  const std::unordered_set<Subset> base_open_set(base_opens.begin(), base_opens.end());
  for (Subset b : total.opens()) {
    if (!b.contains(z)) continue;
    const Subset img = p.image(b);
    if (img.size() != b.size() || !base_open_set.contains(img)) continue;
    const Subspace from = subspace(total, b);
    const Subspace to = subspace(base, img);
    std::vector<std::size_t> forward(from.to_parent.size());
    std::vector<std::size_t> backward(to.to_parent.size());
    for (std::size_t i = 0; i < forward.size(); ++i) {
      forward[i] = to.local_index(p(from.to_parent[i]));
      backward[forward[i]] = i;
    }
    if (discontinuity_by_opens(from.space, to.space, forward)) continue;
    if (discontinuity_by_opens(to.space, from.space, backward)) continue;
    return b;
  }
  return std::nullopt;
}

EtaleSheaf validate_etale(SpacePtr total, SpacePtr base, const ContinuousMap& projection) {
  if (!(projection.domain() == *total) || !(projection.codomain() == *base)) {
    fail(ErrorCode::BaseMismatch, "projection does not go from total to base");
  }
  EtaleSheaf sheaf(ContinuousMap::validate(std::move(total), std::move(base), projection.assignment()));
  const FiniteSpace& t = sheaf.total();
  const FiniteSpace& b = sheaf.base();
  sheaf.fibers_.assign(b.size(), {});
  for (std::size_t z = 0; z < t.size(); ++z) sheaf.fibers_[sheaf.project(z)].push_back(z);
  for (std::size_t x = 0; x < b.size(); ++x) {
    if (sheaf.fibers_[x].empty()) fail(ErrorCode::NotSurjective, b.name(x));
  }
  for (std::size_t z = 0; z < t.size(); ++z) {
    // Any open on which the projection is a homeomorphism contains the
    // minimal open of z, and the property passes to open subsets.
    if (!is_local_homeomorphism_on(sheaf.projection_, t.min_open(z))) fail(ErrorCode::NotLocalHomeo, t.name(z));
  }
  for (std::size_t x = 0; x < b.size(); ++x) {
    Subset f;
    for (std::size_t z : sheaf.fibers_[x]) f = f.with(z);
    for (std::size_t z : sheaf.fibers_[x]) {
      if ((t.min_open(z) & f) != Subset::singleton(z)) fail(ErrorCode::NotLocalHomeo, t.name(z) + " (fiber not discrete)");
    }
  }
  return sheaf;
}

std::vector<std::size_t> fiber(const EtaleSheaf& sheaf, std::string_view x) {
  return sheaf.fiber_at(sheaf.base().index_of(x));
}

Subset Section::image() const {
  Subset out;
  domain.for_each([&](std::size_t x) { out = out.with(values[x]); });
  return out;
}

Section Section::restricted(Subset v) const {
  Section out{v, std::vector<std::size_t>(values.size(), kNone)};
  v.for_each([&](std::size_t x) { out.values[x] = values[x]; });
  return out;
}

std::vector<Section> continuous_lifts(const FiniteSpace& domain, Subset u, const FiniteSpace& target,
                                      const std::vector<std::vector<std::size_t>>& candidates) {
  if (!domain.is_open(u)) fail(ErrorCode::NotOpen, braces(domain, u));
  const std::vector<std::size_t> points = u.members();
  double count = 1;
  for (std::size_t x : points) count *= static_cast<double>(candidates[x].size());
  if (count > static_cast<double>(kMaxCandidateFunctions)) {
    fail(ErrorCode::TooLarge, "more than " + std::to_string(kMaxCandidateFunctions) + " candidate functions");
  }
  std::vector<Section> out;
  Section current{u, std::vector<std::size_t>(domain.size(), kNone)};
  // Continuity on an open domain: the value at every point of minopen(y)
  // lies in the minimal open of the value at y.
  auto consistent = [&](std::size_t depth) {
    const std::size_t p = points[depth];
    const std::size_t vp = current.values[p];
    for (std::size_t i = 0; i < depth; ++i) {
      const std::size_t q = points[i];
      const std::size_t vq = current.values[q];
      if (domain.min_open(p).contains(q) && !target.min_open(vp).contains(vq)) return false;
      if (domain.min_open(q).contains(p) && !target.min_open(vq).contains(vp)) return false;
    }
    return true;
  };
  auto extend = [&](auto&& self, std::size_t depth) -> void {
    if (depth == points.size()) {
      out.push_back(current);
      return;
    }
    for (std::size_t v : candidates[points[depth]]) {
      current.values[points[depth]] = v;
      if (consistent(depth)) self(self, depth + 1);
    }
    current.values[points[depth]] = kNone;
  };
  extend(extend, 0);
  return out;
}

std::vector<Section> sections(const EtaleSheaf& sheaf, Subset u) {
  std::vector<std::vector<std::size_t>> candidates(sheaf.base().size());
  for (std::size_t x = 0; x < candidates.size(); ++x) candidates[x] = sheaf.fiber_at(x);
  return continuous_lifts(sheaf.base(), u, sheaf.total(), candidates);
}

bool is_section(const EtaleSheaf& sheaf, const Section& s) {
  const FiniteSpace& base = sheaf.base();
  const FiniteSpace& total = sheaf.total();
  if (!base.is_open(s.domain) || s.values.size() != base.size()) return false;
  bool ok = true;
  s.domain.for_each([&](std::size_t x) {
    ok = ok && s.values[x] < total.size() && sheaf.project(s.values[x]) == x;
  });
  if (!ok) return false;
  s.domain.for_each([&](std::size_t y) {
    base.min_open(y).for_each([&](std::size_t x) { ok = ok && total.min_open(s.values[y]).contains(s.values[x]); });
  });
  return ok;
}

std::string section_line(const EtaleSheaf& sheaf, const Section& s) {
  std::vector<std::pair<std::string, std::string>> entries;
  s.domain.for_each([&](std::size_t x) { entries.emplace_back(sheaf.base().name(x), sheaf.total().name(s.values[x])); });
  std::sort(entries.begin(), entries.end());
  std::string line = sheaf.base().open_name(s.domain) + ":";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    line += (i ? ", " : " ") + entries[i].first + "->" + entries[i].second;
  }
  return line;
}

EtaleSheaf constant_sheaf(SpacePtr base, const std::vector<std::string>& values) {
  if (values.empty()) fail(ErrorCode::EmptyFiber, "constant sheaf needs a nonempty value set");
  const std::size_t k = values.size();
  if (base->size() * k > kMaxPoints) fail(ErrorCode::TooLarge, "constant sheaf total space too large");
  std::vector<std::string> points;
  std::vector<std::size_t> proj;
  for (std::size_t x = 0; x < base->size(); ++x) {
    for (const auto& m : values) {
      points.push_back(base->name(x) + ":" + m);
      proj.push_back(x);
    }
  }
  std::vector<Subset> basis;
  for (Subset u : base->opens()) {
    for (std::size_t j = 0; j < k; ++j) {
      Subset layer;
      u.for_each([&](std::size_t x) { layer = layer.with(x * k + j); });
      basis.push_back(layer);
    }
  }
  auto total = share(FiniteSpace::from_basis(std::move(points), basis));
  return validate_etale(total, base, ContinuousMap::validate(total, base, std::move(proj)));
}

EtaleSheaf from_fibers_and_sections(SpacePtr base, const std::vector<std::vector<std::string>>& fibers,
                                    const std::vector<Section>& sigma) {
  if (fibers.size() != base->size()) fail(ErrorCode::InvalidFormat, "one fiber per base point required");
  std::vector<std::string> names;
  std::vector<std::size_t> proj;
  for (std::size_t x = 0; x < fibers.size(); ++x) {
    for (const auto& n : fibers[x]) {
      names.push_back(n);
      proj.push_back(x);
    }
  }
  if (names.size() > kMaxPoints) fail(ErrorCode::TooLarge, std::to_string(names.size()) + " total points");
  const std::size_t total_size = names.size();

  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Section& s = sigma[i];
    if (!base->is_open(s.domain)) fail(ErrorCode::NotOpen, braces(*base, s.domain));
    if (s.values.size() != base->size()) fail(ErrorCode::InvalidFormat, "section table has the wrong size");
    s.domain.for_each([&](std::size_t x) {
      if (s.values[x] >= total_size || proj[s.values[x]] != x) {
        fail(ErrorCode::ConditionIFails, "section " + std::to_string(i) + " at " + base->name(x));
      }
    });
  }

  // Sections through each total point, for conditions ii) and iii).
  std::vector<std::vector<std::size_t>> through(total_size);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    sigma[i].domain.for_each([&](std::size_t x) { through[sigma[i].values[x]].push_back(i); });
  }
  for (std::size_t z = 0; z < total_size; ++z) {
    if (through[z].empty()) fail(ErrorCode::ConditionIIFails, names[z]);
  }
  for (std::size_t z = 0; z < total_size; ++z) {
    // Agreement near x: on the minimal open of x, which lies in both domains.
    const Subset near = base->min_open(proj[z]);
    const Section& first = sigma[through[z].front()];
    for (std::size_t j : through[z]) {
      bool agree = true;
      near.for_each([&](std::size_t x) { agree = agree && sigma[j].values[x] == first.values[x]; });
      if (!agree) {
        fail(ErrorCode::ConditionIIIFails,
             "sections " + std::to_string(through[z].front()) + " and " + std::to_string(j) + " at " + names[z]);
      }
    }
  }

  std::unordered_set<Subset> basis_set;
  for (const Section& s : sigma) {
    for (Subset v : base->opens_within(s.domain)) basis_set.insert(s.restricted(v).image());
  }
  std::vector<Subset> basis(basis_set.begin(), basis_set.end());
  auto total = share(FiniteSpace::from_basis(std::move(names), basis));
  EtaleSheaf sheaf = validate_etale(total, base, ContinuousMap::validate(total, base, std::move(proj)));

  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Section& s = sigma[i];
    bool open_map = true;
    s.domain.for_each([&](std::size_t x) {
      open_map = open_map && total->is_open(s.restricted(base->min_open(x)).image());
    });
    if (!is_section(sheaf, s) || !open_map) {
      fail(ErrorCode::TheoremViolation, "generating section " + std::to_string(i) + " is not continuous and open");
    }
  }
  return sheaf;
}

std::optional<Section> inverse_section(const EtaleSheaf& sheaf, Subset b) {
  const FiniteSpace& total = sheaf.total();
  if (!total.is_open(b)) fail(ErrorCode::NotOpen, braces(total, b));
  const Subset img = sheaf.projection().image(b);
  if (img.size() != b.size() || !sheaf.base().is_open(img)) return std::nullopt;
  Section s{img, std::vector<std::size_t>(sheaf.base().size(), kNone)};
  b.for_each([&](std::size_t z) { s.values[sheaf.project(z)] = z; });
  if (!is_section(sheaf, s)) return std::nullopt;
  return s;
}

// ---------------------------------------------------------------------------

SheafMorphism validate_sheaf_morphism(SheafPtr source, SheafPtr target, std::vector<std::size_t> assignment) {
  if (!(source->base() == target->base())) fail(ErrorCode::BaseMismatch, "sheaves live over different spaces");
  ContinuousMap map = ContinuousMap::validate(source->total_ptr(), target->total_ptr(), std::move(assignment));
  const FiniteSpace& total = source->total();
  for (std::size_t z = 0; z < total.size(); ++z) {
    if (target->project(map(z)) != source->project(z)) fail(ErrorCode::TriangleFails, total.name(z));
  }
  for (std::size_t x = 0; x < source->base().size(); ++x) {
    const auto& target_fiber = target->fiber_at(x);
    for (std::size_t z : source->fiber_at(x)) {
      if (!std::binary_search(target_fiber.begin(), target_fiber.end(), map(z))) {
        fail(ErrorCode::TheoremViolation, "commuting map leaves the fiber at " + total.name(z));
      }
    }
  }
  for (std::size_t z = 0; z < total.size(); ++z) {
    if (!is_local_homeomorphism_on(map, total.min_open(z))) {
      fail(ErrorCode::TheoremViolation, "sheaf morphism is not a local homeomorphism at " + total.name(z));
    }
  }
  return SheafMorphism(std::move(source), std::move(target), std::move(map));
}

SheafMorphism identity_morphism(SheafPtr sheaf) {
  std::vector<std::size_t> a(sheaf->total().size());
  std::iota(a.begin(), a.end(), 0);
  return validate_sheaf_morphism(sheaf, sheaf, std::move(a));
}

SheafMorphism compose(const SheafMorphism& psi, const SheafMorphism& phi) {
  if (!(phi.target() == psi.source())) fail(ErrorCode::BaseMismatch, "sheaf morphisms are not composable");
  std::vector<std::size_t> a(phi.source().total().size());
  for (std::size_t z = 0; z < a.size(); ++z) a[z] = psi(phi(z));
  return validate_sheaf_morphism(phi.source_ptr(), psi.target_ptr(), std::move(a));
}

bool is_isomorphism(const SheafMorphism& m) {
  const std::size_t n = m.source().total().size();
  if (m.target().total().size() != n) return false;
  std::vector<std::size_t> inv(n, kNone);
  for (std::size_t z = 0; z < n; ++z) {
    if (inv[m(z)] != kNone) return false;
    inv[m(z)] = z;
  }
  try {
    validate_sheaf_morphism(m.target_ptr(), m.source_ptr(), std::move(inv));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotContinuous || e.code() == ErrorCode::TriangleFails) return false;
    throw;
  }
  return true;
}

SheafMorphism inverse(const SheafMorphism& m) {
  if (!is_isomorphism(m)) fail(ErrorCode::InvalidFormat, "morphism is not invertible");
  std::vector<std::size_t> inv(m.source().total().size());
  for (std::size_t z = 0; z < inv.size(); ++z) inv[m(z)] = z;
  return validate_sheaf_morphism(m.target_ptr(), m.source_ptr(), std::move(inv));
}

MorphismCharacterisations morphism_characterisations(const EtaleSheaf& source, const EtaleSheaf& target,
                                                     const ContinuousMap& map) {
  if (!(source.base() == target.base())) fail(ErrorCode::BaseMismatch, "sheaves live over different spaces");
  MorphismCharacterisations out{true, true, false};
  const FiniteSpace& total = source.total();
  for (std::size_t z = 0; z < total.size(); ++z) {
    out.commutes = out.commutes && target.project(map(z)) == source.project(z);
  }
  auto pushed = [&](const Section& s) {
    Section t{s.domain, std::vector<std::size_t>(s.values.size(), kNone)};
    s.domain.for_each([&](std::size_t x) { t.values[x] = map(s.values[x]); });
    return t;
  };
  std::vector<bool> witnessed(total.size(), false);
  for (Subset u : source.base().opens()) {
    for (const Section& s : sections(source, u)) {
      const bool ok = is_section(target, pushed(s));
      out.maps_sections = out.maps_sections && ok;
      if (ok) s.domain.for_each([&](std::size_t x) { witnessed[s.values[x]] = true; });
    }
  }
  out.local_sections = std::find(witnessed.begin(), witnessed.end(), false) == witnessed.end();
  return out;
}

bool morphism_characterizations_agree(const EtaleSheaf& source, const EtaleSheaf& target, const ContinuousMap& map) {
  return morphism_characterisations(source, target, map).agree();
}

RestrictedSheaf restrict_sheaf(const EtaleSheaf& sheaf, Subset a) {
  if (!sheaf.base().is_open(a)) fail(ErrorCode::NotOpen, braces(sheaf.base(), a));
  RestrictedSheaf out{nullptr, subspace(sheaf.base(), a), subspace(sheaf.total(), sheaf.projection().preimage(a))};
  std::vector<std::size_t> proj(out.total.to_parent.size());
  for (std::size_t i = 0; i < proj.size(); ++i) proj[i] = out.base.local_index(sheaf.project(out.total.to_parent[i]));
  auto total = share(out.total.space);
  auto base = share(out.base.space);
  out.sheaf = share(validate_etale(total, base, ContinuousMap::validate(total, base, std::move(proj))));
  return out;
}

std::optional<SheafMorphism> are_isomorphic(SheafPtr a, SheafPtr b) {
  if (!(a->base() == b->base())) fail(ErrorCode::BaseMismatch, "sheaves live over different spaces");
  const FiniteSpace& ta = a->total();
  const FiniteSpace& tb = b->total();
  if (ta.size() != tb.size()) return std::nullopt;
  double count = 1;
  for (std::size_t x = 0; x < a->base().size(); ++x) {
    if (a->fiber_at(x).size() != b->fiber_at(x).size()) return std::nullopt;
    count *= factorial(a->fiber_at(x).size());
  }
  if (count > static_cast<double>(kMaxCandidateFunctions)) fail(ErrorCode::TooLarge, "isomorphism search space too large");

  std::vector<std::size_t> assignment(ta.size(), kNone);
  std::vector<bool> used(tb.size(), false);
  std::optional<SheafMorphism> found;
  // A bijection of finite spaces is a homeomorphism iff it preserves and
  // reflects the specialisation order.
  auto extend = [&](auto&& self, std::size_t z) -> void {
    if (found) return;
    if (z == ta.size()) {
      SheafMorphism m = validate_sheaf_morphism(a, b, assignment);
      if (is_isomorphism(m)) found = std::move(m);
      return;
    }
    for (std::size_t w : b->fiber_at(a->project(z))) {
      if (used[w]) continue;
      bool ok = true;
      for (std::size_t y = 0; y < z && ok; ++y) {
        ok = ta.below(y, z) == tb.below(assignment[y], w) && ta.below(z, y) == tb.below(w, assignment[y]);
      }
      if (!ok) continue;
      used[w] = true;
      assignment[z] = w;
      self(self, z + 1);
      used[w] = false;
      assignment[z] = kNone;
    }
  };
  extend(extend, 0);
  return found;
}

}  // namespace finsheaf
