#include "finsheaf/theorems.hpp"

#include <algorithm>
#include <chrono>

#include "finsheaf/fixtures.hpp"
#include "finsheaf/functors.hpp"
#include "json.hpp"

namespace finsheaf {

namespace {

using Result = std::optional<std::string>;

std::string braces(const FiniteSpace& space, Subset u) { return "{" + space.open_name(u) + "}"; }

// Homeomorphism test by scanning all opens of both subspaces.
bool homeomorphic_onto(const FiniteSpace& from_space, Subset from, const FiniteSpace& to_space, Subset to,
                       const std::vector<std::size_t>& map) {
  const Subspace a = subspace(from_space, from);
  const Subspace b = subspace(to_space, to);
  std::vector<std::size_t> forward(a.to_parent.size());
  std::vector<std::size_t> backward(b.to_parent.size(), kNone);
  for (std::size_t i = 0; i < forward.size(); ++i) {
    forward[i] = b.local_index(map[a.to_parent[i]]);
    if (backward[forward[i]] != kNone) return false;
    backward[forward[i]] = i;
  }
  if (std::find(backward.begin(), backward.end(), kNone) != backward.end()) return false;
  return !discontinuity_by_opens(a.space, b.space, forward) && !discontinuity_by_opens(b.space, a.space, backward);
}

Result compare_topologies(const FiniteSpace& expected, const FiniteSpace& generated) {
  for (std::size_t z = 0; z < expected.size(); ++z) {
    if (expected.min_open(z) != generated.min_open(z)) {
      return "generated minimal open of " + expected.name(z) + " is " + braces(expected, generated.min_open(z)) +
             ", expected " + braces(expected, expected.min_open(z));
    }
  }
  return std::nullopt;
}

Result witness_replay(const Presheaf& s) {
  if (auto f = check_s1(s).failure) {
    if (f->first == f->second) return "S1 witness names one element twice";
    for (Subset member : f->cover) {
      if (s.restriction(f->open, member)[f->first] != s.restriction(f->open, member)[f->second]) {
        return "S1 witness does not replay: " + describe(s, *f);
      }
    }
    Subset covered;
    for (Subset member : f->cover) covered |= member;
    if (covered != f->open) return "S1 witness cover does not cover: " + describe(s, *f);
  }
  if (auto f = check_s2(s).failure) {
    if (!is_compatible(s, f->cover, f->family) || !gluings(s, f->open, f->cover, f->family).empty()) {
      return "S2 witness does not replay: " + describe(s, *f);
    }
  }
  if (auto f = is_flabby(s).failure) {
    const auto& map = s.restriction(f->from, f->to);
    if (std::find(map.begin(), map.end(), f->missed) != map.end()) return "flabby witness does not replay: " + describe(s, *f);
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(Outcome v) {
  switch (v) {
    case Outcome::Holds: return "holds";
    case Outcome::Fails: return "fails";
    case Outcome::Error: return "error";
    case Outcome::Skipped: return "skipped";
  }
  return "?";
}

CheckReport run_check(const std::string& check, const std::string& instance, const CheckFn& fn, bool timing) {
  CheckReport r{check, instance, Outcome::Holds, "", 0};
  const auto start = std::chrono::steady_clock::now();
  try {
    if (auto w = fn()) {
      r.verdict = Outcome::Fails;
      r.witness = *w;
    }
  } catch (const Error& e) {
    r.witness = e.what();
    switch (e.code()) {
      case ErrorCode::TooLarge:
      case ErrorCode::Inapplicable: r.verdict = Outcome::Skipped; break;
      case ErrorCode::TheoremViolation: r.verdict = Outcome::Fails; break;
      default: r.verdict = Outcome::Error; break;
    }
  }
  if (timing) {
    r.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

std::vector<CheckReport> presheaf_checks(const std::string& instance, PresheafPtr s,
                                         const std::optional<ContinuousMap>& f, bool timing) {
  std::vector<CheckReport> out;
  auto add = [&](const std::string& check, const CheckFn& fn) { out.push_back(run_check(check, instance, fn, timing)); };
  const Presheaf& p = *s;
  const FiniteSpace& base = p.base();
  const auto& opens = p.opens();

  add("stalk-representatives", [&]() -> Result {
    for (std::size_t x = 0; x < base.size(); ++x) {
      const Stalk st = stalk(p, x);
      const Subset top = base.min_open(x);
      for (std::size_t ui = 0; ui < opens.size(); ++ui) {
        if (!opens[ui].contains(x)) continue;
        const auto& down = p.restriction(opens[ui], top);
        for (std::size_t e = 0; e < down.size(); ++e) {
          if (st.class_of(ui, e) != st.class_of_rep[down[e]]) {
            return "at " + base.name(x) + ": canonical map of " + braces(base, opens[ui]) + " disagrees on " +
                   p.elements_at(ui)[e];
          }
        }
      }
    }
    return std::nullopt;
  });

  add("germ-compatibility", [&]() -> Result {
    for (std::size_t x = 0; x < base.size(); ++x) {
      const Stalk st = stalk(p, x);
      for (std::size_t ui = 0; ui < opens.size(); ++ui) {
        for (std::size_t vi = 0; vi < opens.size(); ++vi) {
          if (!opens[vi].contains(x) || !opens[vi].is_subset_of(opens[ui])) continue;
          const auto& map = p.restriction_at(ui, vi);
          for (std::size_t e = 0; e < map.size(); ++e) {
            if (germ(p, st, opens[ui], e) != germ(p, st, opens[vi], map[e])) {
              return "germ of " + p.elements_at(ui)[e] + " at " + base.name(x) + " changes under restriction to " +
                     braces(base, opens[vi]);
            }
          }
        }
      }
    }
    return std::nullopt;
  });

  add("witness-replay", [&] { return witness_replay(p); });

  add("complete-iff-rho-iso", [&]() -> Result {
    const Completion c = rho_morphism(s);
    const bool complete = is_complete(p);
    const MorphismClass cls = classify_morphism(c.rho);
    if (complete != cls.isomorphism) {
      return std::string("complete=") + (complete ? "true" : "false") + " rho iso=" + (cls.isomorphism ? "true" : "false");
    }
    return std::nullopt;
  });

  add("s1-iff-rho-injective", [&]() -> Result {
    const Completion c = rho_morphism(s);
    const bool s1 = check_s1(p).holds();
    const bool injective = classify_morphism(c.rho).injective;
    if (s1 != injective) {
      return std::string("S1=") + (s1 ? "true" : "false") + " rho injective=" + (injective ? "true" : "false");
    }
    return std::nullopt;
  });

  add("presheaf-stalk-bijection", [&]() -> Result {
    const Completion c = rho_morphism(s);
    for (std::size_t x = 0; x < base.size(); ++x) {
      if (auto d = presheaf_stalk_defect(c, x)) return d;
    }
    return std::nullopt;
  });

  add("factor-through", [&]() -> Result {
    const Completion c = rho_morphism(s);
    const Factorisation fac = factor_through(c.rho);
    if (compose(fac.psi, c.rho).components() != c.rho.components()) return "psi o rho != rho";
    if (auto all = all_morphisms(c.sections.presheaf, c.sections.presheaf)) {
      std::size_t matching = 0;
      for (const auto& m : *all) {
        if (compose(m, c.rho).components() != c.rho.components()) continue;
        ++matching;
        if (m.components() != fac.psi.components()) return "another morphism factors rho";
      }
      if (matching != 1) return std::to_string(matching) + " factorisations found";
    }
    return std::nullopt;
  });

  add("restriction-completeness", [&]() -> Result {
    if (!is_complete(p)) return std::nullopt;
    for (Subset a : opens) {
      if (!is_complete(restrict_presheaf(p, a))) return "restriction to " + braces(base, a) + " is not complete";
    }
    return std::nullopt;
  });

  add("sheafify-restriction", [&]() -> Result {
    for (Subset a : opens) {
      if (!is_isomorphism(sheafify_restriction_comparison(s, a))) {
        return "restriction to " + braces(base, a) + ": comparison is not an isomorphism";
      }
    }
    return std::nullopt;
  });

  add("sheafify-functor", [&]() -> Result {
    const Sheafification sh = sheafify(s);
    if (!(sheafify_morphism(identity_morphism(s)) == identity_morphism(sh.sheaf))) return "Sh(id) != id";
    const Completion c = rho_morphism(s);
    const PresheafMorphism id_gamma = identity_morphism(c.sections.presheaf);
    if (!(sheafify_morphism(compose(id_gamma, c.rho)) == compose(sheafify_morphism(id_gamma), sheafify_morphism(c.rho)))) {
      return "Sh(id o rho) != Sh(id) o Sh(rho)";
    }
    return std::nullopt;
  });

  if (f) {
    add("pushout-completeness", [&]() -> Result {
      if (!is_complete(p)) return std::nullopt;
      if (!is_complete(pushout_presheaf(*f, p))) return "push-out of a complete presheaf is not complete";
      return std::nullopt;
    });
    add("pushout-functor", [&]() -> Result {
      const PresheafPtr pushed = share(pushout_presheaf(*f, p));
      if (!(pushout_morphism(*f, identity_morphism(s)).components() == identity_morphism(pushed).components())) {
        return "push-out of id is not id";
      }
      const Completion c = rho_morphism(s);
      const PresheafMorphism id_gamma = identity_morphism(c.sections.presheaf);
      if (pushout_morphism(*f, compose(id_gamma, c.rho)).components() !=
          compose(pushout_morphism(*f, id_gamma), pushout_morphism(*f, c.rho)).components()) {
        return "push-out does not preserve composition";
      }
      return std::nullopt;
    });
  }
  return out;
}

std::vector<CheckReport> sheaf_checks(const std::string& instance, SheafPtr sheaf, bool timing) {
  std::vector<CheckReport> out;
  auto add = [&](const std::string& check, const CheckFn& fn) { out.push_back(run_check(check, instance, fn, timing)); };
  const EtaleSheaf& sh = *sheaf;
  const FiniteSpace& base = sh.base();
  const FiniteSpace& total = sh.total();

  add("counit-iso", [&]() -> Result {
    counit(sheaf);
    return std::nullopt;
  });

  add("sections-complete", [&]() -> Result {
    const SectionPresheaf gamma = section_presheaf(sheaf);
    if (auto f = check_s1(*gamma.presheaf).failure) return "S1: " + describe(*gamma.presheaf, *f);
    if (auto f = check_s2(*gamma.presheaf).failure) return "S2: " + describe(*gamma.presheaf, *f);
    return std::nullopt;
  });

  add("equivalence", [&]() -> Result {
    counit(sheaf);
    const Completion c = rho_morphism(section_presheaf(sheaf).presheaf);
    if (!classify_morphism(c.rho).isomorphism) return "rho of the section presheaf is not an isomorphism";
    return std::nullopt;
  });

  add("section-restriction", [&]() -> Result {
    for (Subset a : base.opens()) {
      if (auto d = section_restriction_difference(sheaf, a)) return "over " + braces(base, a) + ": " + *d;
    }
    return std::nullopt;
  });

  add("sheaf-stalk-bijection", [&]() -> Result {
    const SectionPresheaf gamma = section_presheaf(sheaf);
    for (std::size_t x = 0; x < base.size(); ++x) {
      if (auto d = sheaf_stalk_defect(gamma, x)) return d;
    }
    return std::nullopt;
  });

  add("section-lemmas", [&]() -> Result {
    std::vector<Subset> images;
    std::vector<bool> reached(total.size(), false);
    for (Subset u : base.opens()) {
      const auto secs = sections(sh, u);
      for (const Section& s : secs) {
        const Subset img = s.image();
        if (!total.is_open(img)) return "image not open: " + section_line(sh, s);
        if (!homeomorphic_onto(base, u, total, img, s.values)) return "not a homeomorphism onto its image: " + section_line(sh, s);
        images.push_back(img);
        img.for_each([&](std::size_t z) { reached[z] = true; });
      }
      // Sections agreeing at x agree on the minimal open of x.
      for (std::size_t x = 0; x < base.size(); ++x) {
        if (!u.contains(x)) continue;
        std::map<std::size_t, const Section*> first;
        for (const Section& s : secs) {
          auto [it, fresh] = first.emplace(s.values[x], &s);
          if (fresh) continue;
          bool agree = true;
          base.min_open(x).for_each([&](std::size_t y) { agree = agree && it->second->values[y] == s.values[y]; });
          if (!agree) return "sections agree at " + base.name(x) + " but not nearby: " + section_line(sh, s);
        }
      }
    }
    for (std::size_t z = 0; z < total.size(); ++z) {
      if (!reached[z]) return total.name(z) + " lies on no section";
    }
    return compare_topologies(total, FiniteSpace::from_basis(total.points(), images));
  });

  add("local-homeomorphism-basis", [&]() -> Result {
    std::vector<Subset> good;
    for (Subset b : total.opens()) {
      if (is_local_homeomorphism_on(sh.projection(), b)) good.push_back(b);
    }
    return compare_topologies(total, FiniteSpace::from_basis(total.points(), good));
  });

  add("local-homeomorphism-oracle", [&]() -> Result {
    for (std::size_t z = 0; z < total.size(); ++z) {
      if (!local_homeomorphism_witness(sh.projection(), z)) return "no open around " + total.name(z);
    }
    return std::nullopt;
  });

  add("fiber-discrete", [&]() -> Result {
    for (std::size_t x = 0; x < base.size(); ++x) {
      Subset fib;
      for (std::size_t z : sh.fiber_at(x)) fib = fib.with(z);
      for (std::size_t z : sh.fiber_at(x)) {
        const auto& opens = total.opens();
        const bool isolated = std::any_of(opens.begin(), opens.end(), [&](Subset o) { return (o & fib) == Subset::singleton(z); });
        if (!isolated) return total.name(z) + " is not isolated in its fiber";
      }
    }
    return std::nullopt;
  });

  add("morphism-characterisations", [&]() -> Result {
    const ContinuousMap id = ContinuousMap::identity(sheaf->total_ptr());
    if (!morphism_characterizations_agree(sh, sh, id)) return "identity";
    for (std::size_t w = 0; w < total.size(); ++w) {
      const ContinuousMap constant =
          ContinuousMap::validate(sheaf->total_ptr(), sheaf->total_ptr(), std::vector<std::size_t>(total.size(), w));
      if (!morphism_characterizations_agree(sh, sh, constant)) return "constant map to " + total.name(w);
    }
    return std::nullopt;
  });
  return out;
}

std::vector<CheckReport> change_of_base_checks(const std::string& instance, const ContinuousMap& f, SheafPtr source,
                                               SheafPtr sheaf, bool timing) {
  std::vector<CheckReport> out;
  auto add = [&](const std::string& check, const CheckFn& fn) { out.push_back(run_check(check, instance, fn, timing)); };

  add("pullback-agreement", [&]() -> Result {
    const Pullback pb = pullback_sheaf(f, sheaf);
    for (std::size_t x = 0; x < f.domain().size(); ++x) {
      if (pb.sheaf->fiber_at(x).size() != sheaf->fiber_at(f(x)).size()) return "fiber size at " + f.domain().name(x);
    }
    const RelativeSections via = pullback_via_presheaf(f, sheaf);
    if (!is_isomorphism(pullback_comparison(via, pb))) return "comparison map is not an isomorphism";
    return std::nullopt;
  });

  add("pushforward-stalks", [&]() -> Result {
    // With no sections over some f^-1(V(y)) the push-forward has an empty
    // stalk and is not surjective onto Y.
    for (std::size_t p = 0; p < f.codomain().size(); ++p) {
      if (sections(*source, f.preimage(f.codomain().min_open(p))).empty()) {
        fail(ErrorCode::Inapplicable, "no sections over the preimage of the minimal open of " + f.codomain().name(p));
      }
    }
    const EtaleSheaf pushed = pushforward_sheaf(f, source);
    const FiniteSpace& y = f.codomain();
    for (std::size_t p = 0; p < y.size(); ++p) {
      const std::size_t expected = sections(*source, f.preimage(y.min_open(p))).size();
      if (pushed.fiber_at(p).size() != expected) {
        return "fiber at " + y.name(p) + " has " + std::to_string(pushed.fiber_at(p).size()) + " points, expected " +
               std::to_string(expected);
      }
    }
    return std::nullopt;
  });
  return out;
}

std::vector<CheckReport> system_checks(const std::string& instance, const RandomSystem& rs, bool timing) {
  std::vector<CheckReport> out;
  out.push_back(run_check("direct-limit", instance, [&]() -> Result {
    const DirectedSystem& sys = rs.system;
    const DirectLimit limit = colimit(sys);
    for (std::size_t a = 0; a < sys.index_count(); ++a) {
      for (std::size_t b = 0; b < sys.index_count(); ++b) {
        if (!sys.leq(a, b)) continue;
        for (std::size_t x = 0; x < sys.carrier(a).size(); ++x) {
          if (limit.canonical(b, sys.transition(a, b)[x]) != limit.canonical(a, x)) {
            return "canonical maps do not commute at " + sys.index_name(a) + "->" + sys.index_name(b);
          }
        }
      }
    }
    const auto u = universal_map(sys, limit, rs.cocone);
    for (std::size_t a = 0; a < sys.index_count(); ++a) {
      for (std::size_t x = 0; x < sys.carrier(a).size(); ++x) {
        if (u[limit.canonical(a, x)] != rs.cocone.legs[a][x]) return "universal map does not factor the cocone";
      }
    }
    check_surjectivity_criterion(sys, rs.cocone, limit, u);
    check_injectivity_criterion(sys, rs.cocone, limit, u);

    Cocone canonical{limit.class_count(), {}};
    for (std::size_t a = 0; a < sys.index_count(); ++a) {
      canonical.legs.emplace_back();
      for (std::size_t x = 0; x < sys.carrier(a).size(); ++x) canonical.legs.back().push_back(limit.canonical(a, x));
    }
    const auto id = universal_map(sys, limit, canonical);
    for (std::size_t c = 0; c < id.size(); ++c) {
      if (id[c] != c) return "universal map of the canonical cocone is not the identity";
    }
    if (!check_surjectivity_criterion(sys, canonical, limit, id).surjective) return "canonical cocone not surjective";
    if (!check_injectivity_criterion(sys, canonical, limit, id).injective) return "canonical cocone not injective";
    return std::nullopt;
  }, timing));
  return out;
}

std::vector<CheckReport> fixture_verdict_checks(bool timing) {
  // Expected predicate values; nullopt where the table says nothing.
  struct Row {
    const char* name;
    PresheafPtr s;
    std::optional<bool> complete, s1, s2, flabby;
  };
  const std::vector<Row> rows = {
      {"P1", fixtures::p1(), true, {}, {}, false},
      {"CONST2", fixtures::const2(), false, {}, {}, true},
      {"GLUEFAIL", fixtures::gluefail(), {}, true, false, {}},
      {"S1FAIL", fixtures::s1fail(), {}, false, true, true},
  };
  std::vector<CheckReport> out;
  for (const Row& row : rows) {
    out.push_back(run_check("fixture-verdicts", row.name, [&]() -> Result {
      const bool s1 = check_s1(*row.s).holds();
      const bool s2 = check_s2(*row.s).holds();
      const bool flabby = is_flabby(*row.s).holds();
      const bool complete = is_complete(*row.s);
      auto matches = [](const std::optional<bool>& want, bool got) { return !want || *want == got; };
      if (matches(row.complete, complete) && matches(row.s1, s1) && matches(row.s2, s2) && matches(row.flabby, flabby)) {
        return std::nullopt;
      }
      auto b = [](bool v) { return v ? "true" : "false"; };
      return std::string("complete=") + b(complete) + " S1=" + b(s1) + " S2=" + b(s2) + " flabby=" + b(flabby);
    }, timing));
  }
  return out;
}

std::vector<CheckReport> theorem_suite(const SuiteOptions& options) {
  std::vector<CheckReport> out;
  auto append = [&](std::vector<CheckReport> more) { out.insert(out.end(), more.begin(), more.end()); };
  if (options.fixtures) {
    append(fixture_verdict_checks(options.timing));
    const SpacePtr pt = fixtures::point();
    for (const auto& [name, s] : fixtures::presheaves()) {
      const SpacePtr base = s->base_ptr();
      append(presheaf_checks(name, s, ContinuousMap::validate(base, pt, std::vector<std::size_t>(base->size(), 0)),
                             options.timing));
    }
    std::vector<fixtures::NamedSheaf> sheaves = fixtures::sheaves();
    for (const auto& [name, space] : fixtures::spaces()) {
      sheaves.emplace_back("Const(" + name + ",2)", share(constant_sheaf(space, fixtures::values(2))));
    }
    for (const auto& [name, sheaf] : sheaves) append(sheaf_checks(name, sheaf, options.timing));
    const SheafPtr two_over_point = share(constant_sheaf(pt, fixtures::values(2)));
    for (const auto& [name, space] : fixtures::spaces()) {
      const ContinuousMap f = ContinuousMap::validate(space, pt, std::vector<std::size_t>(space->size(), 0));
      const SheafPtr source = share(constant_sheaf(space, fixtures::values(2)));
      append(change_of_base_checks(name + "->PT", f, source, two_over_point, options.timing));
    }
  }
  for (std::size_t i = 0; i < options.count; ++i) {
    const std::string name = "random/" + std::to_string(options.seed) + "/" + std::to_string(i);
    RandomInstance inst;
    CheckReport gen = run_check("generate", name, [&]() -> Result {
      inst = random_instance(options.seed, i, options.max_points);
      return std::nullopt;
    }, options.timing);
    if (gen.verdict != Outcome::Holds) {
      out.push_back(gen);
      continue;
    }
    append(presheaf_checks(name, inst.presheaf, inst.map, options.timing));
    append(sheaf_checks(name, inst.sheaf, options.timing));
    append(change_of_base_checks(name, *inst.map, inst.sheaf, inst.codomain_sheaf, options.timing));
  }
  for (std::size_t i = 0; i < options.count; ++i) {
    const std::string name = "system/" + std::to_string(options.seed) + "/" + std::to_string(i);
    append(system_checks(name, random_system(options.seed, i), options.timing));
  }
  return out;
}

std::string format_text(const std::vector<CheckReport>& reports) {
  std::string out;
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& r : reports) {
    ++counts[static_cast<int>(r.verdict)];
    out += to_string(r.verdict) + " " + r.check + " " + r.instance;
    if (!r.witness.empty()) out += ": " + r.witness;
    if (r.millis) out += " [" + std::to_string(r.millis) + " ms]";
    out += "\n";
  }
  out += std::to_string(reports.size()) + " checks: " + std::to_string(counts[0]) + " hold, " + std::to_string(counts[1]) +
         " fail, " + std::to_string(counts[2]) + " errors, " + std::to_string(counts[3]) + " skipped\n";
  return out;
}

std::string format_json(const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    arr.push_back({{"check", r.check}, {"instance", r.instance}, {"verdict", to_string(r.verdict)},
                   {"witness", r.witness}, {"millis", r.millis}});
  }
  return arr.dump(2) + "\n";
}

bool all_hold(const std::vector<CheckReport>& reports) {
  return std::none_of(reports.begin(), reports.end(),
                      [](const CheckReport& r) { return r.verdict == Outcome::Fails || r.verdict == Outcome::Error; });
}

}  // namespace finsheaf
