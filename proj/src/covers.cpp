#include <algorithm>
#include <map>

#include "finsheaf/presheaf.hpp"

namespace finsheaf {

namespace {

// Budget on enumerated covers and families per check.
constexpr std::size_t kSearchBudget = 50'000'000;

std::string braces(const FiniteSpace& space, Subset u) { return "{" + space.open_name(u) + "}"; }

std::string cover_name(const FiniteSpace& space, const std::vector<Subset>& cover) {
  std::string out = "[";
  for (std::size_t i = 0; i < cover.size(); ++i) out += (i ? ", " : "") + braces(space, cover[i]);
  return out + "]";
}

void antichain_covers(const std::vector<Subset>& candidates, std::size_t next, Subset target,
                      std::vector<Subset>& chosen, Subset covered, const std::vector<Subset>& reach,
                      std::vector<std::vector<Subset>>& out) {
  if (next == candidates.size()) {
    if (covered == target && !chosen.empty()) out.push_back(chosen);
    return;
  }
  if (!target.is_subset_of(covered | reach[next])) return;
  const Subset c = candidates[next];
  const bool comparable = std::any_of(chosen.begin(), chosen.end(),
                                      [&](Subset d) { return c.is_subset_of(d) || d.is_subset_of(c); });
  if (!comparable) {
    chosen.push_back(c);
    antichain_covers(candidates, next + 1, target, chosen, covered | c, reach, out);
    chosen.pop_back();
  }
  antichain_covers(candidates, next + 1, target, chosen, covered, reach, out);
}

}  // namespace

std::vector<std::vector<Subset>> open_covers(const FiniteSpace& space, Subset u, CoverOptions options) {
  std::vector<std::vector<Subset>> out;
  if (u.empty()) {
    out.push_back({});
    if (options.include_covers_with_whole) out.push_back({u});
    return out;
  }
  std::vector<Subset> candidates;
  for (Subset v : space.opens_within(u)) {
    if (v.empty()) continue;
    if (v == u && !options.include_covers_with_whole) continue;
    candidates.push_back(v);
  }
  if (options.enumeration == CoverEnumeration::AllSubsets) {
    if (candidates.size() > 24) fail(ErrorCode::TooLarge, "too many opens for exhaustive cover enumeration");
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << candidates.size()); ++mask) {
      std::vector<Subset> cover;
      Subset covered;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if ((mask >> i) & 1U) {
          cover.push_back(candidates[i]);
          covered |= candidates[i];
        }
      }
      if (covered == u) out.push_back(std::move(cover));
    }
    return out;
  }
  // Larger opens first, so each antichain is produced with its members in
  // decreasing canonical order; reversed below for output.
  std::reverse(candidates.begin(), candidates.end());
  std::vector<Subset> reach(candidates.size() + 1);
  for (std::size_t i = candidates.size(); i-- > 0;) reach[i] = reach[i + 1] | candidates[i];
  std::vector<Subset> chosen;
  antichain_covers(candidates, 0, u, chosen, Subset{}, reach, out);
  for (auto& cover : out) std::sort(cover.begin(), cover.end());
  std::sort(out.begin(), out.end());
  return out;
}

Verdict<S1Failure> check_s1(const Presheaf& s, CoverOptions options) {
  const auto& opens = s.opens();
  for (std::size_t ui = 0; ui < opens.size(); ++ui) {
    const Subset u = opens[ui];
    const std::size_t n = s.elements_at(ui).size();
    if (n < 2) continue;
    for (const auto& cover : open_covers(s.base(), u, options)) {
      std::map<std::vector<std::size_t>, std::size_t> seen;
      for (std::size_t e = 0; e < n; ++e) {
        std::vector<std::size_t> signature;
        for (Subset member : cover) signature.push_back(s.restriction(u, member)[e]);
        auto [it, inserted] = seen.emplace(std::move(signature), e);
        if (!inserted) return {S1Failure{u, cover, it->second, e}};
      }
    }
  }
  return {};
}

bool is_compatible(const Presheaf& s, const std::vector<Subset>& cover, const std::vector<std::size_t>& family) {
  for (std::size_t a = 0; a < cover.size(); ++a) {
    for (std::size_t b = a + 1; b < cover.size(); ++b) {
      const Subset meet = cover[a] & cover[b];
      if (meet.empty()) continue;
      if (s.restriction(cover[a], meet)[family[a]] != s.restriction(cover[b], meet)[family[b]]) return false;
    }
  }
  return true;
}

std::vector<std::size_t> gluings(const Presheaf& s, Subset u, const std::vector<Subset>& cover,
                                 const std::vector<std::size_t>& family) {
  std::vector<std::size_t> out;
  const std::size_t n = s.elements(u).size();
  for (std::size_t e = 0; e < n; ++e) {
    bool glues = true;
    for (std::size_t a = 0; a < cover.size() && glues; ++a) glues = s.restriction(u, cover[a])[e] == family[a];
    if (glues) out.push_back(e);
  }
  return out;
}

Verdict<S2Failure> check_s2(const Presheaf& s, CoverOptions options) {
  const auto& opens = s.opens();
  std::size_t budget = kSearchBudget;
  for (std::size_t ui = 0; ui < opens.size(); ++ui) {
    const Subset u = opens[ui];
    for (const auto& cover : open_covers(s.base(), u, options)) {
      const std::size_t k = cover.size();
      // Element signatures of S(U) on this cover, for the gluing lookup.
      std::map<std::vector<std::size_t>, std::size_t> glued;
      for (std::size_t e = 0; e < s.elements_at(ui).size(); ++e) {
        std::vector<std::size_t> sig;
        for (Subset member : cover) sig.push_back(s.restriction(u, member)[e]);
        glued.emplace(std::move(sig), e);
      }
      std::vector<std::size_t> family(k, 0);
      std::vector<const std::vector<std::string>*> sets;
      for (Subset member : cover) sets.push_back(&s.elements(member));

      // Depth-first over families, pruning on pairwise compatibility.
      std::optional<std::vector<std::size_t>> bad;
      auto extend = [&](auto&& self, std::size_t depth) -> void {
        if (bad) return;
        if (budget-- == 0) fail(ErrorCode::TooLarge, "gluing search budget exhausted");
        if (depth == k) {
          if (!glued.contains(family)) bad = family;
          return;
        }
        for (std::size_t e = 0; e < sets[depth]->size() && !bad; ++e) {
          family[depth] = e;
          bool ok = true;
          for (std::size_t b = 0; b < depth && ok; ++b) {
            const Subset meet = cover[depth] & cover[b];
            if (meet.empty()) continue;
            ok = s.restriction(cover[depth], meet)[e] == s.restriction(cover[b], meet)[family[b]];
          }
          if (ok) self(self, depth + 1);
        }
      };
      extend(extend, 0);
      if (bad) return {S2Failure{u, cover, *bad}};
    }
  }
  return {};
}

bool is_complete(const Presheaf& s) { return check_s1(s).holds() && check_s2(s).holds(); }

Verdict<FlabbyFailure> is_flabby(const Presheaf& s) {
  const auto& opens = s.opens();
  for (std::size_t u = 0; u < opens.size(); ++u) {
    for (std::size_t v = 0; v < opens.size(); ++v) {
      if (v == u || !opens[v].is_subset_of(opens[u])) continue;
      std::vector<bool> hit(s.elements_at(v).size(), false);
      for (std::size_t t : s.restriction_at(u, v)) hit[t] = true;
      for (std::size_t t = 0; t < hit.size(); ++t) {
        if (!hit[t]) return {FlabbyFailure{opens[u], opens[v], t}};
      }
    }
  }
  return {};
}

std::string describe(const Presheaf& s, const S1Failure& f) {
  const auto& elems = s.elements(f.open);
  return "U=" + braces(s.base(), f.open) + " cover=" + cover_name(s.base(), f.cover) + " s=" + elems[f.first] +
         " t=" + elems[f.second];
}

std::string describe(const Presheaf& s, const S2Failure& f) {
  std::string family = "(";
  for (std::size_t a = 0; a < f.family.size(); ++a) {
    family += (a ? ", " : "") + s.elements(f.cover[a])[f.family[a]];
  }
  return "U=" + braces(s.base(), f.open) + " cover=" + cover_name(s.base(), f.cover) + " family=" + family + ")";
}

std::string describe(const Presheaf& s, const FlabbyFailure& f) {
  return "U=" + braces(s.base(), f.from) + " V=" + braces(s.base(), f.to) + " missed=" + s.elements(f.to)[f.missed];
}

}  // namespace finsheaf
