// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "finsheaf/fixtures.hpp"
#include "finsheaf/functors.hpp"
#include "finsheaf/generate.hpp"
#include "finsheaf/io.hpp"
#include "oracles.hpp"

using namespace finsheaf;
namespace fx = finsheaf::fixtures;

namespace {

// Pinned limits.
constexpr double kFixtureSeconds = 1.0;
constexpr double kCounitSeconds = 30.0;
constexpr double kRhoSeconds = 60.0;
constexpr std::size_t kSeeds = 4;
constexpr std::size_t kPerSeed = 50;
constexpr std::size_t kAcceptMaxPoints = 4;
constexpr std::size_t kMinRandomSheaves = 200;
constexpr std::size_t kMinRandomPresheaves = 200;
constexpr std::size_t kMinPullbackPairs = 100;
constexpr std::size_t kMinRestrictionInstances = 100;
constexpr std::size_t kMinSystems = 100;
constexpr std::size_t kMinBasisSheaves = 100;
constexpr double kUniquenessCandidates = 1e4;
constexpr double kOracleSectionGuard = 1e5;

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int n, const std::function<void(Outcome&)>& body, double limit = 0) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.note << "exception: " << e.what() << "; ";
  }
  const double secs = seconds_since(t0);
  if (limit > 0 && secs >= limit) {
    o.pass = false;
    o.note << "time limit " << limit << " s exceeded; ";
  }
  if (!o.pass) ++failures;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", secs);
  std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " (" << buf << " s) " << o.note.str() << "\n";
  std::cout.flush();
}

std::vector<RandomInstance> random_instances() {
  std::vector<RandomInstance> out;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    for (auto& inst : gen_random_instances(seed, kPerSeed, kAcceptMaxPoints)) out.push_back(std::move(inst));
  }
  return out;
}

std::string open_name(const FiniteSpace& s, Subset u) { return "{" + s.open_name(u) + "}"; }

// Homeomorphism of `from` onto `to` under map, tested open by open.
bool homeomorphism(const FiniteSpace& a_space, Subset a, const FiniteSpace& b_space, Subset b,
                   const std::vector<std::size_t>& map) {
  const Subspace sa = subspace(a_space, a);
  const Subspace sb = subspace(b_space, b);
  if (sa.to_parent.size() != sb.to_parent.size()) return false;
  std::vector<std::size_t> fwd(sa.to_parent.size()), back(sb.to_parent.size(), kNone);
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    const std::size_t img = map[sa.to_parent[i]];
    if (!b.contains(img)) return false;
    fwd[i] = sb.local_index(img);
    if (back[fwd[i]] != kNone) return false;
    back[fwd[i]] = i;
  }
  return !discontinuity_by_opens(sa.space, sb.space, fwd) && !discontinuity_by_opens(sb.space, sa.space, back);
}

struct OpenSet {
  std::unordered_set<std::uint64_t> bits;
  explicit OpenSet(const FiniteSpace& s) {
    for (Subset u : s.opens()) bits.insert(u.bits());
  }
  bool contains(Subset u) const { return bits.count(u.bits()) > 0; }
};

// Section facts on one sheaf, checked from the
// definitions. Returns the first violated fact.
std::optional<std::string> section_lemmas(const EtaleSheaf& sh) {
  const FiniteSpace& base = sh.base();
  const FiniteSpace& total = sh.total();
  const OpenSet total_opens(total);
  const std::vector<std::size_t>& proj = sh.projection().assignment();

  std::vector<std::pair<Subset, std::vector<std::size_t>>> all;  // (domain, values)
  for (Subset u : base.opens()) {
    for (const auto& values : oracle::sections(sh, u)) all.emplace_back(u, values);
  }
  std::vector<Subset> images;
  for (const auto& [u, values] : all) {
    Subset img;
    u.for_each([&](std::size_t x) { img = img.with(values[x]); });
    images.push_back(img);
    if (!total_opens.contains(img)) return "image " + open_name(total, img) + " not open";
    if (!homeomorphism(base, u, total, img, values)) return "not a homeomorphism: section over " + open_name(base, u);
  }
  // (4): every total point lies on some section.
  Subset covered;
  for (Subset img : images) covered |= img;
  if (covered != total.whole()) return "point " + total.name((total.whole() - covered).lowest()) + " on no section";
  // (5): agreement at a point spreads to an open neighbourhood.
  const auto& base_opens = base.opens();
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const Subset both = all[i].first & all[j].first;
      bool ok = true;
      both.for_each([&](std::size_t x) {
        if (!ok || all[i].second[x] != all[j].second[x]) return;
        bool found = false;
        for (Subset w : base_opens) {
          if (!w.contains(x) || !w.is_subset_of(both)) continue;
          bool agree = true;
          w.for_each([&](std::size_t y) { agree = agree && all[i].second[y] == all[j].second[y]; });
          if (agree) {
            found = true;
            break;
          }
        }
        ok = found;
      });
      if (!ok) return "sections agree at a point but on no open around it";
    }
  }
  // Section images and the local homeomorphism opens each form a basis,, checked at every open and point.
  for (Subset o : total.opens()) {
    bool ok = true;
    o.for_each([&](std::size_t z) {
      if (!ok) return;
      bool found = false;
      for (Subset img : images) found = found || (img.contains(z) && img.is_subset_of(o));
      ok = found;
    });
    if (!ok) return "images of sections do not form a basis at " + open_name(total, o);
  }
  for (std::size_t z = 0; z < total.size(); ++z) {
    // Some open B with z in B inside min_open(z) on which the projection is
    // a local homeomorphism onto its image; then B = min_open(z).
    const Subset b = total.min_open(z);
    Subset image;
    b.for_each([&](std::size_t w) { image = image.with(proj[w]); });
    bool local = true;
    b.for_each([&](std::size_t w) {
      if (!local) return;
      bool found = false;
      for (Subset nb : total.opens_within(b)) {
        if (!nb.contains(w)) continue;
        Subset img;
        nb.for_each([&](std::size_t v) { img = img.with(proj[v]); });
        if (base.is_open(img) && homeomorphism(total, nb, base, img, proj)) {
          found = true;
          break;
        }
      }
      local = found;
    });
    if (!local || !base.is_open(image)) return "no local homeomorphism open at " + total.name(z);
  }
  return std::nullopt;
}

PresheafPtr terminal(SpacePtr base) {
  RawPresheaf raw;
  raw.base = base;
  for (Subset u : base->opens()) raw.sections[u] = {"*"};
  return share(validate_presheaf(raw));
}

}  // namespace

int main() {
  std::cout << "acceptance: seeds 0-" << kSeeds - 1 << ", " << kPerSeed << " instances per seed, max points "
            << kAcceptMaxPoints << "\n";

  report(1, [](Outcome& o) {
    struct Row {
      const char* name;
      PresheafPtr s;
      std::optional<bool> complete, flabby, s1, s2;
    };
    const std::vector<Row> rows{
        {"P1", fx::p1(), true, false, std::nullopt, std::nullopt},
        {"CONST2", fx::const2(), false, true, std::nullopt, std::nullopt},
        {"GLUEFAIL", fx::gluefail(), std::nullopt, std::nullopt, true, false},
        {"S1FAIL", fx::s1fail(), std::nullopt, true, false, true},
    };
    for (const Row& r : rows) {
      const bool s1 = check_s1(*r.s).holds(), s2 = check_s2(*r.s).holds();
      const bool complete = is_complete(*r.s), flabby = is_flabby(*r.s).holds();
      // Library and brute force must agree on every predicate.
      o.require(s1 == oracle::s1(*r.s) && s2 == oracle::s2(*r.s) && flabby == oracle::flabby(*r.s),
                std::string(r.name) + " oracle mismatch");
      if (r.complete) o.require(complete == *r.complete, std::string(r.name) + " complete");
      if (r.flabby) o.require(flabby == *r.flabby, std::string(r.name) + " flabby");
      if (r.s1) o.require(s1 == *r.s1, std::string(r.name) + " S1");
      if (r.s2) o.require(s2 == *r.s2, std::string(r.name) + " S2");
    }
    o.note << "4 fixtures; ";
  }, kFixtureSeconds);

  const std::vector<RandomInstance> instances = random_instances();

  report(2, [&](Outcome& o) {
    std::size_t n = 0;
    for (const auto& [name, sh] : fx::sheaves()) {
      o.require(is_isomorphism(counit(sh)), name);
    }
    for (const auto& inst : instances) {
      o.require(is_isomorphism(counit(inst.sheaf)), inst.name);
      ++n;
    }
    o.require(n >= kMinRandomSheaves, "too few random sheaves");
    o.note << "4 fixture sheaves + " << n << " random sheaves; ";
  }, kCounitSeconds);

  report(3, [&](Outcome& o) {
    std::size_t n = 0, complete = 0;
    for (const auto& inst : instances) {
      const Completion c = rho_morphism(inst.presheaf);
      const MorphismClass k = classify_morphism(c.rho);
      const bool is_c = is_complete(*inst.presheaf);
      o.require(is_c == k.isomorphism, inst.name + " complete vs rho iso");
      bool all_injective = true;
      for (std::size_t ui = 0; ui < inst.presheaf->open_count(); ++ui) {
        const auto& comp = c.rho.component_at(ui);
        all_injective = all_injective && std::set<std::size_t>(comp.begin(), comp.end()).size() == comp.size();
      }
      o.require(check_s1(*inst.presheaf).holds() == all_injective, inst.name + " S1 vs injective");
      complete += is_c;
      ++n;
    }
    o.require(n >= kMinRandomPresheaves, "too few random presheaves");
    o.note << n << " presheaves, " << complete << " complete; ";
  }, kRhoSeconds);

  report(4, [&](Outcome& o) {
    std::size_t n = 0;
    auto one = [&](const std::string& name, SheafPtr sh) {
      const PresheafPtr g = section_presheaf(std::move(sh)).presheaf;
      o.require(is_complete(*g), name);
      if (oracle::small(*g)) o.require(oracle::s1(*g) && oracle::s2(*g), name + " oracle");
      ++n;
    };
    for (const auto& [name, sh] : fx::sheaves()) one(name, sh);
    for (const auto& inst : instances) one(inst.name, inst.sheaf);
    o.note << n << " section presheaves; ";
  });

  report(5, [&](Outcome& o) {
    std::size_t pairs = 0, morphisms = 0, unique_checked = 0;
    for (const auto& [sname, s] : fx::presheaves()) {
      std::vector<std::pair<std::string, PresheafPtr>> targets{{"terminal", terminal(s->base_ptr())}};
      for (const auto& [tname, t] : fx::presheaves()) {
        if (!(t->base() == s->base())) continue;
        targets.emplace_back("Gamma(Sh(" + tname + "))", rho_morphism(t).sections.presheaf);
        if (is_complete(*t)) targets.emplace_back(tname, t);
      }
      for (const auto& [tname, e] : targets) {
        const auto phis = all_morphisms(s, e, kUniquenessCandidates);
        if (!phis) continue;
        ++pairs;
        for (const PresheafMorphism& phi : *phis) {
          const Factorisation f = factor_through(phi);
          o.require(compose(f.psi, f.completion.rho) == phi, sname + " -> " + tname + " triangle");
          ++morphisms;
          if (auto psis = all_morphisms(f.completion.sections.presheaf, e, kUniquenessCandidates)) {
            std::size_t matching = 0;
            for (const auto& psi : *psis) matching += compose(psi, f.completion.rho) == phi;
            o.require(matching == 1, sname + " -> " + tname + " uniqueness");
            ++unique_checked;
          }
        }
      }
    }
    o.require(pairs > 0 && unique_checked > 0, "no pairs checked");
    o.note << pairs << " fixture pairs, " << morphisms << " morphisms, uniqueness confirmed for " << unique_checked
           << "; ";
  });

  report(6, [&](Outcome& o) {
    std::size_t n = 0, skipped = 0;
    for (std::uint64_t seed = 0; n < kMinPullbackPairs && seed < 64; ++seed) {
      for (const auto& inst : gen_random_instances(seed, kPerSeed, kAcceptMaxPoints)) {
        if (!inst.map || !inst.codomain_sheaf) continue;
        try {
          const Pullback pb = pullback_sheaf(*inst.map, inst.codomain_sheaf);
          const RelativeSections via = pullback_via_presheaf(*inst.map, inst.codomain_sheaf);
          o.require(is_isomorphism(pullback_comparison(via, pb)), inst.name + " comparison");
          o.require(are_isomorphic(via.sheafification.sheaf, pb.sheaf).has_value(), inst.name + " search");
          ++n;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::TooLarge) throw;
          ++skipped;
        }
      }
    }
    o.require(n >= kMinPullbackPairs, "too few pull-back pairs");
    o.note << n << " (f, E) pairs, " << skipped << " over the size guard; ";
  });

  report(7, [&](Outcome& o) {
    std::size_t n = 0, complete_inputs = 0;
    auto one = [&](const std::string& name, PresheafPtr s, const ContinuousMap& f) {
      const SheafPtr sh = sheafify(s).sheaf;
      const PresheafPtr gamma = section_presheaf(sh).presheaf;
      for (const PresheafPtr& p : {s, gamma}) {
        if (!is_complete(*p)) continue;
        ++complete_inputs;
        o.require(is_complete(pushout_presheaf(f, *p)), name + " push-out");
        for (Subset a : p->opens()) o.require(is_complete(restrict_presheaf(*p, a)), name + " restriction");
      }
      for (Subset a : s->opens()) {
        o.require(is_isomorphism(sheafify_restriction_comparison(s, a)), name + " Sh(S|A)");
        o.require(!section_restriction_difference(sh, a), name + " Gamma(S|A)");
      }
      ++n;
    };
    for (const auto& [name, s] : fx::presheaves()) {
      const std::size_t k = s->base().size();
      one(name, s, ContinuousMap::validate(s->base_ptr(), fx::point(), std::vector<std::size_t>(k, 0)));
    }
    std::size_t random = 0;
    for (const auto& inst : instances) {
      if (!inst.map) continue;
      one(inst.name, inst.presheaf, *inst.map);
      ++random;
    }
    o.require(random >= kMinRestrictionInstances, "too few random instances");
    o.note << "4 fixtures + " << random << " random instances, " << complete_inputs << " complete inputs; ";
  });

  report(8, [&](Outcome& o) {
    std::size_t stalks = 0, opens = 0, guarded = 0, systems = 0;
    std::vector<PresheafPtr> presheaves;
    for (const auto& [name, s] : fx::presheaves()) presheaves.push_back(s);
    for (const auto& inst : instances) presheaves.push_back(inst.presheaf);
    for (const PresheafPtr& s : presheaves) {
      for (std::size_t x = 0; x < s->base().size(); ++x) {
        const Stalk st = stalk(*s, x);
        const std::size_t reps = s->elements(s->base().min_open(x)).size();
        bool ok = st.size() == reps && std::set<std::size_t>(st.class_of_rep.begin(), st.class_of_rep.end()).size() == reps;
        const auto label = oracle::agreement_classes(st.system);
        for (std::size_t a = 0; a < st.system.index_count() && ok; ++a) {
          for (std::size_t b = 0; b < st.system.index_count() && ok; ++b) {
            for (std::size_t i = 0; i < st.system.carrier(a).size(); ++i) {
              for (std::size_t j = 0; j < st.system.carrier(b).size(); ++j) {
                ok = ok && (label[a][i] == label[b][j]) == (st.limit.canonical(a, i) == st.limit.canonical(b, j));
              }
            }
          }
        }
        o.require(ok, "stalk at " + s->base().name(x));
        ++stalks;
      }
    }
    std::vector<SheafPtr> sheaves;
    for (const auto& [name, sh] : fx::sheaves()) sheaves.push_back(sh);
    for (const auto& inst : instances) sheaves.push_back(inst.sheaf);
    for (const SheafPtr& sh : sheaves) {
      for (Subset u : sh->base().opens()) {
        double candidates = 1;
        u.for_each([&](std::size_t x) { candidates *= static_cast<double>(sh->fiber_at(x).size()); });
        if (candidates > kOracleSectionGuard) {
          ++guarded;
          continue;
        }
        std::set<std::vector<std::size_t>> got;
        for (const Section& s : sections(*sh, u)) got.insert(s.values);
        o.require(got == oracle::sections(*sh, u), "sections over " + open_name(sh->base(), u));
        ++opens;
      }
    }
    for (std::size_t i = 0; i < kMinSystems + 50; ++i) {
      const RandomSystem rs = random_system(0, i);
      const DirectLimit lim = colimit(rs.system);
      const auto u = universal_map(rs.system, lim, rs.cocone);
      std::vector<bool> hit(rs.cocone.target_size, false);
      for (std::size_t v : u) hit[v] = true;
      const bool surj = std::find(hit.begin(), hit.end(), false) == hit.end();
      const bool inj = std::set<std::size_t>(u.begin(), u.end()).size() == u.size();
      o.require(check_surjectivity_criterion(rs.system, rs.cocone, lim, u).surjective == surj, "surjectivity");
      o.require(check_injectivity_criterion(rs.system, rs.cocone, lim, u).injective == inj, "injectivity");
      ++systems;
    }
    o.require(systems >= kMinSystems, "too few systems");
    o.note << stalks << " stalks, " << opens << " section sets (" << guarded << " over guard), " << systems
           << " systems; ";
  });

  report(9, [&](Outcome& o) {
    std::size_t n = 0;
    for (const auto& [name, sh] : fx::sheaves()) {
      if (auto w = section_lemmas(*sh)) o.require(false, name + " " + *w);
    }
    for (const auto& inst : instances) {
      if (n >= kMinBasisSheaves + 20) break;
      if (auto w = section_lemmas(*inst.sheaf)) o.require(false, inst.name + " " + *w);
      ++n;
    }
    o.require(n >= kMinBasisSheaves, "too few random sheaves");
    o.note << "4 fixture sheaves + " << n << " random sheaves; ";
  });

  report(10, [](Outcome& o) {
    std::size_t n = 0;
    const std::vector<fx::NamedSpace> spaces{{"SIERP", fx::sierpinski()}, {"DISC2", fx::two_points()},
                                             {"MIXED4", fx::mixed4()}};
    for (const auto& [name, space] : spaces) {
      for (std::size_t m = 1; m <= 3; ++m) {
        const EtaleSheaf c = constant_sheaf(space, fx::values(m));
        for (Subset u : space->opens()) {
          std::size_t expected = 1;
          for (std::size_t k = 0; k < oracle::components(*space, u).size(); ++k) expected *= m;
          o.require(sections(c, u).size() == expected, name + " M=" + std::to_string(m) + " " + open_name(*space, u));
          ++n;
        }
      }
    }
    o.note << n << " (space, M, open) triples; ";
  });

  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << "\n";
  return failures == 0 ? 0 : 1;
}
