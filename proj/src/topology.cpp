#include "finsheaf/topology.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <unordered_set>

namespace finsheaf {

struct FiniteSpace::OpenCache {
  std::once_flag once;
  std::vector<Subset> opens;
};

namespace {

void check_point_names(const std::vector<std::string>& points) {
  if (points.size() > kMaxPoints) {
    fail(ErrorCode::TooLarge, std::to_string(points.size()) + " points (limit " + std::to_string(kMaxPoints) + ")");
  }
  for (const auto& p : points) {
    if (p.empty() || p.find(',') != std::string::npos || p.find("->") != std::string::npos) {
      fail(ErrorCode::InvalidPointName, "'" + p + "'");
    }
  }
}

// Intersection of all given sets containing x; `whole` when none does.
Subset meet_containing(const std::vector<Subset>& sets, std::size_t x, Subset whole, bool* found) {
  Subset m = whole;
  *found = false;
  for (Subset s : sets) {
    if (s.contains(x)) {
      m &= s;
      *found = true;
    }
  }
  return m;
}

std::vector<Subset> enumerate_alexandrov(const std::vector<Subset>& min_opens) {
  std::unordered_set<Subset> seen{Subset{}};
  std::vector<Subset> frontier{Subset{}};
  std::vector<Subset> out{Subset{}};
  while (!frontier.empty()) {
    std::vector<Subset> next;
    for (Subset u : frontier) {
      for (std::size_t x = 0; x < min_opens.size(); ++x) {
        if (u.contains(x)) continue;
        Subset v = u | min_opens[x];
        if (seen.insert(v).second) {
          if (seen.size() > kMaxOpens) {
            fail(ErrorCode::TooLarge, "more than " + std::to_string(kMaxOpens) + " opens");
          }
          next.push_back(v);
          out.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

FiniteSpace::FiniteSpace(std::vector<std::string> points, std::vector<Subset> min_opens)
    : points_(std::move(points)), min_opens_(std::move(min_opens)), cache_(std::make_shared<OpenCache>()) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!index_.emplace(points_[i], i).second) fail(ErrorCode::DuplicatePoint, points_[i]);
  }
}

FiniteSpace FiniteSpace::validate(std::vector<std::string> points, const std::vector<Subset>& raw_opens) {
  check_point_names(points);
  const Subset whole = Subset::first(points.size());
  std::vector<Subset> opens = raw_opens;
  for (Subset u : opens) {
    if (!u.is_subset_of(whole)) fail(ErrorCode::UnknownPoint, "open mentions point index " + std::to_string((u - whole).lowest()));
  }
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());

  std::vector<Subset> placeholder(points.size());
  FiniteSpace named(std::move(points), std::move(placeholder));

  std::unordered_set<Subset> members(opens.begin(), opens.end());
  if (!members.contains(Subset{})) fail(ErrorCode::MissingEmptyOpen, "{}");
  for (std::size_t i = 0; i < opens.size(); ++i) {
    for (std::size_t j = i + 1; j < opens.size(); ++j) {
      if (!members.contains(opens[i] | opens[j])) {
        fail(ErrorCode::NotClosedUnderUnion, "{" + named.open_name(opens[i]) + "} u {" + named.open_name(opens[j]) + "}");
      }
    }
  }
  for (std::size_t i = 0; i < opens.size(); ++i) {
    for (std::size_t j = i + 1; j < opens.size(); ++j) {
      if (!members.contains(opens[i] & opens[j])) {
        fail(ErrorCode::NotClosedUnderIntersection,
             "{" + named.open_name(opens[i]) + "} n {" + named.open_name(opens[j]) + "}");
      }
    }
  }
  if (!members.contains(whole)) fail(ErrorCode::MissingWholeSpace, "{" + named.open_name(whole) + "}");

  std::vector<Subset> min_opens(named.size());
  for (std::size_t x = 0; x < named.size(); ++x) {
    bool found = false;
    min_opens[x] = meet_containing(opens, x, whole, &found);
  }
  named.min_opens_ = std::move(min_opens);
  std::call_once(named.cache_->once, [&] { named.cache_->opens = std::move(opens); });
  return named;
}

FiniteSpace FiniteSpace::from_basis(std::vector<std::string> points, const std::vector<Subset>& basis) {
  check_point_names(points);
  const Subset whole = Subset::first(points.size());
  std::vector<Subset> sets = basis;
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<Subset> placeholder(points.size());
  FiniteSpace named(std::move(points), std::move(placeholder));
  for (Subset b : sets) {
    if (!b.is_subset_of(whole)) fail(ErrorCode::UnknownPoint, "basis set mentions point index " + std::to_string((b - whole).lowest()));
  }

  std::unordered_set<Subset> members(sets.begin(), sets.end());
  std::vector<Subset> min_opens(named.size());
  for (std::size_t x = 0; x < named.size(); ++x) {
    bool found = false;
    Subset m = meet_containing(sets, x, whole, &found);
    if (!found) fail(ErrorCode::NotABasis, "point " + named.name(x) + " is not covered");
    if (!members.contains(m)) {
      // Find the pair (B1, B2) that has no basis set between x and B1 n B2.
      for (std::size_t i = 0; i < sets.size(); ++i) {
        if (!sets[i].contains(x)) continue;
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
          if (!sets[j].contains(x)) continue;
          const Subset meet = sets[i] & sets[j];
          const bool refined = std::any_of(sets.begin(), sets.end(),
                                           [&](Subset b) { return b.contains(x) && b.is_subset_of(meet); });
          if (!refined) {
            fail(ErrorCode::NotABasis, "x=" + named.name(x) + " B1={" + named.open_name(sets[i]) + "} B2={" +
                                           named.open_name(sets[j]) + "}");
          }
        }
      }
      fail(ErrorCode::NotABasis, "x=" + named.name(x));
    }
    min_opens[x] = m;
  }
  named.min_opens_ = std::move(min_opens);
  return named;
}

FiniteSpace FiniteSpace::from_min_opens(std::vector<std::string> points, std::vector<Subset> min_opens) {
  check_point_names(points);
  if (min_opens.size() != points.size()) fail(ErrorCode::NotABasis, "one minimal open per point required");
  FiniteSpace space(std::move(points), std::move(min_opens));
  const Subset whole = space.whole();
  for (std::size_t x = 0; x < space.size(); ++x) {
    const Subset m = space.min_opens_[x];
    if (!m.contains(x) || !m.is_subset_of(whole)) fail(ErrorCode::NotABasis, "minimal open of " + space.name(x));
    m.for_each([&](std::size_t y) {
      if (!space.min_opens_[y].is_subset_of(m)) {
        fail(ErrorCode::NotABasis, "x=" + space.name(x) + " y=" + space.name(y) + ": minimal opens not nested");
      }
    });
  }
  return space;
}

FiniteSpace FiniteSpace::discrete(std::vector<std::string> points) {
  std::vector<Subset> mins(points.size());
  for (std::size_t i = 0; i < mins.size(); ++i) mins[i] = Subset::singleton(i);
  return from_min_opens(std::move(points), std::move(mins));
}

std::optional<std::size_t> FiniteSpace::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteSpace::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  fail(ErrorCode::UnknownPoint, std::string(name));
}

bool FiniteSpace::is_open(Subset s) const {
  if (!s.is_subset_of(whole())) return false;
  bool open = true;
  s.for_each([&](std::size_t x) { open = open && min_opens_[x].is_subset_of(s); });
  return open;
}

const std::vector<Subset>& FiniteSpace::opens() const {
  std::call_once(cache_->once, [this] { cache_->opens = enumerate_alexandrov(min_opens_); });
  return cache_->opens;
}

std::vector<Subset> FiniteSpace::opens_within(Subset u) const {
  std::vector<Subset> out;
  for (Subset v : opens()) {
    if (v.is_subset_of(u)) out.push_back(v);
  }
  return out;
}

Subset FiniteSpace::subset_of(const std::vector<std::string>& names) const {
  Subset s;
  for (const auto& n : names) s = s.with(index_of(n));
  return s;
}

std::vector<std::string> FiniteSpace::names_of(Subset s) const {
  std::vector<std::string> out;
  s.for_each([&](std::size_t i) { out.push_back(points_[i]); });
  std::sort(out.begin(), out.end());
  return out;
}

std::string FiniteSpace::open_name(Subset s) const {
  std::string out;
  for (const auto& n : names_of(s)) {
    if (!out.empty()) out += ',';
    out += n;
  }
  return out;
}

Subset FiniteSpace::parse_open_name(std::string_view name) const {
  Subset s;
  if (name.empty()) return s;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = name.find(',', start);
    s = s.with(index_of(name.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return s;
}

Subset Subspace::lift(Subset local) const {
  Subset out;
  local.for_each([&](std::size_t i) { out = out.with(to_parent[i]); });
  return out;
}

Subset Subspace::lower(Subset parent) const {
  Subset out;
  for (std::size_t i = 0; i < to_parent.size(); ++i) {
    if (parent.contains(to_parent[i])) out = out.with(i);
  }
  return out;
}

std::size_t Subspace::local_index(std::size_t parent_index) const {
  auto it = std::find(to_parent.begin(), to_parent.end(), parent_index);
  if (it == to_parent.end()) fail(ErrorCode::UnknownPoint, "point index " + std::to_string(parent_index) + " not in subspace");
  return static_cast<std::size_t>(it - to_parent.begin());
}

Subspace subspace(const FiniteSpace& space, Subset points) {
  if (!points.is_subset_of(space.whole())) fail(ErrorCode::UnknownPoint, "subspace outside the space");
  std::vector<std::size_t> to_parent = points.members();
  std::vector<std::string> names;
  for (std::size_t p : to_parent) names.push_back(space.name(p));
  Subspace sub{FiniteSpace::empty(), points, to_parent};
  std::vector<Subset> mins;
  for (std::size_t p : to_parent) mins.push_back(sub.lower(space.min_open(p) & points));
  sub.space = FiniteSpace::from_min_opens(std::move(names), std::move(mins));
  return sub;
}

FiniteSpace validate_space(std::vector<std::string> points, const std::vector<std::vector<std::string>>& raw_opens) {
  check_point_names(points);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!index.emplace(points[i], i).second) fail(ErrorCode::DuplicatePoint, points[i]);
  }
  std::vector<Subset> opens;
  for (const auto& raw : raw_opens) {
    Subset u;
    for (const auto& n : raw) {
      auto it = index.find(n);
      if (it == index.end()) fail(ErrorCode::UnknownPoint, n);
      u = u.with(it->second);
    }
    opens.push_back(u);
  }
  return FiniteSpace::validate(std::move(points), opens);
}

FiniteSpace generate_from_basis(std::vector<std::string> points, const std::vector<std::vector<std::string>>& basis) {
  std::vector<Subset> sets;
  {
    // Resolve names through a throwaway discrete space.
    const FiniteSpace names = FiniteSpace::discrete(points);
    for (const auto& b : basis) sets.push_back(names.subset_of(b));
  }
  return FiniteSpace::from_basis(std::move(points), sets);
}

Subset min_open(const FiniteSpace& space, std::string_view point) { return space.min_open(space.index_of(point)); }

std::vector<Subset> connected_components(const FiniteSpace& space, Subset u) {
  if (!space.is_open(u)) fail(ErrorCode::NotOpen, "{" + space.open_name(u) + "}");
  std::vector<std::size_t> parent(space.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // In a finite space x and y are linked when one is in the other's minimal open.
  u.for_each([&](std::size_t y) {
    space.min_open(y).for_each([&](std::size_t x) { parent[root(x)] = root(y); });
  });
  std::vector<Subset> comps;
  std::vector<int> slot(space.size(), -1);
  u.for_each([&](std::size_t x) {
    const std::size_t r = root(x);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[static_cast<std::size_t>(slot[r])] = comps[static_cast<std::size_t>(slot[r])].with(x);
  });
  return comps;
}

ContinuousMap ContinuousMap::validate(SpacePtr domain, SpacePtr codomain, std::vector<std::size_t> assignment) {
  if (assignment.size() != domain->size()) fail(ErrorCode::UnknownPoint, "assignment is not total on the domain");
  for (std::size_t x = 0; x < assignment.size(); ++x) {
    if (assignment[x] >= codomain->size()) fail(ErrorCode::UnknownPoint, "image of " + domain->name(x));
  }
  ContinuousMap f(std::move(domain), std::move(codomain), std::move(assignment));
  // Continuity in a finite space: f(minopen(x)) lies in minopen(f(x)).
  bool continuous = true;
  for (std::size_t x = 0; x < f.domain_->size() && continuous; ++x) {
    continuous = f.image(f.domain_->min_open(x)).is_subset_of(f.codomain_->min_open(f(x)));
  }
  if (!continuous) {
    // The canonically-first bad open is always a minimal open.
    std::vector<Subset> mins = f.codomain_->min_opens();
    std::sort(mins.begin(), mins.end());
    for (Subset v : mins) {
      if (!f.domain_->is_open(f.preimage(v))) fail(ErrorCode::NotContinuous, "{" + f.codomain_->open_name(v) + "}");
    }
    fail(ErrorCode::NotContinuous, "?");
  }
  return f;
}

ContinuousMap ContinuousMap::identity(SpacePtr space) {
  std::vector<std::size_t> a(space->size());
  std::iota(a.begin(), a.end(), 0);
  return ContinuousMap(space, space, std::move(a));
}

Subset ContinuousMap::image(Subset s) const {
  Subset out;
  s.for_each([&](std::size_t x) { out = out.with(assignment_[x]); });
  return out;
}

Subset ContinuousMap::preimage(Subset s) const {
  Subset out;
  for (std::size_t x = 0; x < assignment_.size(); ++x) {
    if (s.contains(assignment_[x])) out = out.with(x);
  }
  return out;
}

ContinuousMap validate_map(SpacePtr domain, SpacePtr codomain, const std::map<std::string, std::string>& assignment) {
  std::vector<std::size_t> a(domain->size(), 0);
  std::vector<bool> seen(domain->size(), false);
  for (const auto& [from, to] : assignment) {
    const std::size_t x = domain->index_of(from);
    a[x] = codomain->index_of(to);
    seen[x] = true;
  }
  for (std::size_t x = 0; x < seen.size(); ++x) {
    if (!seen[x]) fail(ErrorCode::UnknownPoint, "no image for " + domain->name(x));
  }
  return ContinuousMap::validate(std::move(domain), std::move(codomain), std::move(a));
}

ContinuousMap compose(const ContinuousMap& g, const ContinuousMap& f) {
  if (!(f.codomain() == g.domain())) fail(ErrorCode::BaseMismatch, "composition of non-composable maps");
  std::vector<std::size_t> a(f.domain().size());
  for (std::size_t x = 0; x < a.size(); ++x) a[x] = g(f(x));
  return ContinuousMap::validate(f.domain_ptr(), g.codomain_ptr(), std::move(a));
}

std::optional<Subset> discontinuity_by_opens(const FiniteSpace& domain, const FiniteSpace& codomain,
                                             const std::vector<std::size_t>& assignment) {
  const auto& domain_opens = domain.opens();
  std::unordered_set<Subset> open_set(domain_opens.begin(), domain_opens.end());
  for (Subset v : codomain.opens()) {
    Subset pre;
    for (std::size_t x = 0; x < assignment.size(); ++x) {
      if (v.contains(assignment[x])) pre = pre.with(x);
    }
    if (!open_set.contains(pre)) return v;
  }
  return std::nullopt;
}

}  // namespace finsheaf
