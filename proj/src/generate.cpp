#include "finsheaf/generate.hpp"

#include <algorithm>
#include <numeric>

#include "finsheaf/functors.hpp"

namespace finsheaf {

namespace {

Rng tagged_rng(std::uint64_t seed, std::uint64_t index, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), tag};
  return Rng(seq);
}

template <class T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform(rng, 0, i - 1)]);
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Random compatible choice of one value per slot: values[i] ranges over
// 0..sizes[i]-1 and ok(i, j, vi, vj) must hold for every i < j.
template <class Ok>
std::optional<std::vector<std::size_t>> random_family(Rng& rng, const std::vector<std::size_t>& sizes, Ok&& ok) {
  std::vector<std::size_t> choice(sizes.size());
  auto extend = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == sizes.size()) return true;
    std::vector<std::size_t> order(sizes[depth]);
    std::iota(order.begin(), order.end(), 0);
    shuffle(rng, order);
    for (std::size_t v : order) {
      choice[depth] = v;
      bool fits = true;
      for (std::size_t i = 0; i < depth && fits; ++i) fits = ok(i, depth, choice[i], v);
      if (fits && self(self, depth + 1)) return true;
    }
    return false;
  };
  if (!extend(extend, 0)) return std::nullopt;
  return choice;
}

std::optional<Presheaf> try_presheaf(Rng& rng, const SpacePtr& space) {
  const auto& opens = space->opens();
  const std::size_t m = opens.size();
  std::vector<std::size_t> size(m);
  // full[u * m + w]: restriction table from opens[u] to opens[w].
  std::vector<std::vector<std::size_t>> full(m * m);
  std::vector<std::vector<std::size_t>> children(m);
  std::vector<std::vector<std::vector<std::size_t>>> hasse(m);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (v == u || !opens[v].is_subset_of(opens[u])) continue;
      bool covering = true;
      for (std::size_t w = 0; w < m && covering; ++w) {
        covering = w == u || w == v || !(opens[v].is_subset_of(opens[w]) && opens[w].is_subset_of(opens[u]));
      }
      if (covering) children[u].push_back(v);
    }
  }
  auto index_of = [&](Subset s) {
    return static_cast<std::size_t>(std::find(opens.begin(), opens.end(), s) - opens.begin());
  };

  for (std::size_t u = 0; u < m; ++u) {
    const auto& kids = children[u];
    hasse[u].assign(kids.size(), {});
    if (kids.empty()) {
      size[u] = uniform(rng, 1, opens[u].empty() ? 2 : kMaxGeneratedSectionSet);
    } else {
      std::vector<std::size_t> sizes;
      for (std::size_t c : kids) sizes.push_back(size[c]);
      const std::size_t wanted = uniform(rng, 1, kMaxGeneratedSectionSet);
      for (std::size_t e = 0; e < wanted; ++e) {
        auto family = random_family(rng, sizes, [&](std::size_t i, std::size_t j, std::size_t vi, std::size_t vj) {
          const std::size_t w = index_of(opens[kids[i]] & opens[kids[j]]);
          return full[kids[i] * m + w][vi] == full[kids[j] * m + w][vj];
        });
        if (!family) continue;
        for (std::size_t i = 0; i < kids.size(); ++i) hasse[u][i].push_back((*family)[i]);
        ++size[u];
      }
    }
    full[u * m + u].resize(size[u]);
    std::iota(full[u * m + u].begin(), full[u * m + u].end(), 0);
    for (std::size_t w = 0; w < m; ++w) {
      if (w == u || !opens[w].is_subset_of(opens[u])) continue;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (!opens[w].is_subset_of(opens[kids[i]])) continue;
        auto& table = full[u * m + w];
        table.resize(size[u]);
        for (std::size_t e = 0; e < size[u]; ++e) table[e] = full[kids[i] * m + w][hasse[u][i][e]];
        break;
      }
    }
  }
  for (std::size_t x = 0; x < space->size(); ++x) {
    if (size[index_of(space->min_open(x))] == 0) return std::nullopt;
  }

  RawPresheaf raw{space, {}, {}};
  for (std::size_t u = 0; u < m; ++u) raw.sections[opens[u]] = numbered("s", size[u]);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t i = 0; i < children[u].size(); ++i) {
      const std::size_t c = children[u][i];
      RawRestriction r{opens[u], opens[c], {}};
      for (std::size_t e = 0; e < size[u]; ++e) r.values["s" + std::to_string(e)] = "s" + std::to_string(hasse[u][i][e]);
      raw.restrictions.push_back(std::move(r));
    }
  }
  return validate_presheaf(raw);
}

}  // namespace

Rng stream_rng(std::uint64_t seed, std::uint64_t index) { return tagged_rng(seed, index, 0); }

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng() % (hi - lo + 1)); }

SpacePtr random_space(Rng& rng, std::size_t n, const std::string& prefix) {
  // below[i][j]: i <= j in the preorder.
  std::vector<std::vector<bool>> below(n, std::vector<bool>(n, false));
  const std::size_t density = uniform(rng, 0, 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) below[i][j] = i == j || uniform(rng, 0, 9) < density;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) below[i][j] = below[i][j] || (below[i][k] && below[k][j]);
    }
  }
  std::vector<Subset> mins(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (below[i][j]) mins[j] = mins[j].with(i);
    }
  }
  return share(FiniteSpace::from_min_opens(numbered(prefix, n), std::move(mins)));
}

PresheafPtr random_presheaf(Rng& rng, SpacePtr space) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto p = try_presheaf(rng, space);
    if (!p) continue;
    PresheafPtr s = share(std::move(*p));
    // A third of the time, replace by a complete presheaf of sections.
    if (uniform(rng, 0, 2) == 0) {
      PresheafPtr gamma = section_presheaf(sheafify(s).sheaf).presheaf;
      bool small = true;
      for (std::size_t ui = 0; ui < gamma->open_count(); ++ui) {
        small = small && gamma->elements_at(ui).size() <= kMaxGeneratedSectionSet;
      }
      if (small) return gamma;
    }
    return s;
  }
  RawPresheaf raw{space, {}, {}};
  for (Subset u : space->opens()) raw.sections[u] = {"s0"};
  return share(validate_presheaf(raw));
}

ContinuousMap random_map(Rng& rng, SpacePtr domain, SpacePtr codomain) {
  const std::size_t n = domain->size();
  std::vector<std::size_t> sizes(n, codomain->size());
  auto f = random_family(rng, sizes, [&](std::size_t i, std::size_t j, std::size_t fi, std::size_t fj) {
    return (!domain->below(i, j) || codomain->below(fi, fj)) && (!domain->below(j, i) || codomain->below(fj, fi));
  });
  if (!f) fail(ErrorCode::GenerationExhausted, "no order-preserving map");
  return ContinuousMap::validate(std::move(domain), std::move(codomain), std::move(*f));
}

RandomInstance random_instance(std::uint64_t seed, std::size_t index, std::size_t max_points) {
  if (max_points < 1 || max_points > kMaxGeneratedPoints) {
    fail(ErrorCode::GenerationExhausted, "max points must lie in [1, " + std::to_string(kMaxGeneratedPoints) + "]");
  }
  Rng rng = stream_rng(seed, index);
  RandomInstance out;
  out.name = "random/" + std::to_string(seed) + "/" + std::to_string(index);
  out.space = random_space(rng, uniform(rng, 1, max_points), "x");
  out.presheaf = random_presheaf(rng, out.space);
  out.sheaf = sheafify(out.presheaf).sheaf;
  SpacePtr codomain = random_space(rng, uniform(rng, 1, max_points), "y");
  out.map = random_map(rng, out.space, codomain);
  out.codomain_sheaf = sheafify(random_presheaf(rng, codomain)).sheaf;
  return out;
}

std::vector<RandomInstance> gen_random_instances(std::uint64_t seed, std::size_t count, std::size_t max_points) {
  std::vector<RandomInstance> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_instance(seed, i, max_points));
  return out;
}

RandomSystem random_system(std::uint64_t seed, std::size_t index) {
  Rng rng = tagged_rng(seed, index, 1);
  const std::size_t lower = uniform(rng, 0, 4);
  const bool twin = uniform(rng, 0, 2) == 0;
  const std::size_t top = lower;
  const std::size_t k = lower + 1 + (twin ? 1 : 0);

  // leq over indices: a random DAG on the lower indices (edges go up in
  // number), everything below the top, and the twin equivalent to the top.
  std::vector<std::vector<bool>> leq(k, std::vector<bool>(k, false));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      leq[a][b] = a == b || b >= top || (a < b && uniform(rng, 0, 9) < 4);
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) leq[a][b] = leq[a][b] || (leq[a][c] && leq[c][b]);
    }
  }

  RawDirectedSystem raw;
  raw.indices = numbered("i", k);
  raw.carriers.assign(k, {});
  std::vector<std::size_t> size(k);
  // maps[a][b] for a <= b, a != b.
  std::vector<std::vector<std::vector<std::size_t>>> maps(k, std::vector<std::vector<std::size_t>>(k));
  size[top] = uniform(rng, 1, 3);
  if (twin) {
    size[top + 1] = size[top];
    std::vector<std::size_t> perm(size[top]);
    std::iota(perm.begin(), perm.end(), 0);
    shuffle(rng, perm);
    maps[top][top + 1] = perm;
    maps[top + 1][top].resize(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) maps[top + 1][top][perm[i]] = i;
  }
  for (std::size_t a = lower; a-- > 0;) {
    std::vector<std::size_t> up;
    for (std::size_t b = a + 1; b < k; ++b) {
      if (leq[a][b]) up.push_back(b);
    }
    std::vector<std::size_t> sizes;
    for (std::size_t b : up) sizes.push_back(size[b]);
    const std::size_t wanted = uniform(rng, 0, 3);
    for (std::size_t e = 0; e < wanted; ++e) {
      auto family = random_family(rng, sizes, [&](std::size_t i, std::size_t j, std::size_t vi, std::size_t vj) {
        const std::size_t b = up[i];
        const std::size_t c = up[j];
        if (leq[b][c] && maps[b][c][vi] != vj) return false;
        if (leq[c][b] && maps[c][b][vj] != vi) return false;
        return true;
      });
      if (!family) continue;
      for (std::size_t i = 0; i < up.size(); ++i) maps[a][up[i]].push_back((*family)[i]);
      ++size[a];
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    raw.carriers[a] = numbered(raw.indices[a] + "e", size[a]);
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b || !leq[a][b]) continue;
      raw.order.emplace_back(a, b);
      raw.maps[{a, b}] = maps[a][b];
    }
  }

  RandomSystem out{validate_system(std::move(raw)), {}};
  // Every cocone factors through the top carrier.
  out.cocone.target_size = uniform(rng, 1, 4);
  std::vector<std::size_t> at_top(size[top]);
  for (auto& v : at_top) v = uniform(rng, 0, out.cocone.target_size - 1);
  out.cocone.legs.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t e = 0; e < size[a]; ++e) {
      out.cocone.legs[a].push_back(a == top ? at_top[e] : at_top[out.system.transition(a, top)[e]]);
    }
  }
  return out;
}

}  // namespace finsheaf
