#include "doctest.h"
#include "finsheaf/etale.hpp"
#include "finsheaf/fixtures.hpp"
#include "finsheaf/functors.hpp"
#include "finsheaf/generate.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace finsheaf;
namespace fx = finsheaf::fixtures;

namespace {

SheafPtr constant(SpacePtr base, std::size_t m) { return share(constant_sheaf(std::move(base), fx::values(m))); }

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Moves the fiber over p onto q and back on the constant sheaf over DISC2.
std::vector<std::size_t> fiber_swap(const EtaleSheaf& s) {
  std::vector<std::size_t> a(s.total().size());
  for (std::size_t z = 0; z < a.size(); ++z) a[z] = (z + 2) % 4;
  return a;
}

}  // namespace

TEST_CASE("validate_etale") {
  CHECK_NOTHROW(constant(fx::sierpinski(), 2));
  const SpacePtr pt = fx::point();
  const SpacePtr disc = fx::two_points();
  CHECK_NOTHROW(validate_etale(disc, pt, ContinuousMap::validate(disc, pt, {0, 0})));
  const SpacePtr sierp = fx::sierpinski();
  CHECK(error_witness(ErrorCode::NotLocalHomeo,
                      [&] { validate_etale(sierp, pt, ContinuousMap::validate(sierp, pt, {0, 0})); }) == "b");
  // No open around b maps homeomorphically onto an open.
  const ContinuousMap proj = ContinuousMap::validate(sierp, pt, {0, 0});
  CHECK_FALSE(local_homeomorphism_witness(proj, 1).has_value());
  CHECK(local_homeomorphism_witness(proj, 0).has_value());
}

TEST_CASE("fibers") {
  const SheafPtr c = constant(fx::sierpinski(), 3);
  for (std::size_t x = 0; x < 2; ++x) {
    CHECK(c->fiber_at(x).size() == 3);
    for (std::size_t z : c->fiber_at(x)) CHECK(c->total().name(z).rfind(c->base().name(x) + ":", 0) == 0);
  }
  std::size_t total = 0;
  for (std::size_t x = 0; x < c->base().size(); ++x) total += c->fiber_at(x).size();
  CHECK(total == c->total().size());
  CHECK(fiber(*c, "a").size() == 3);
}

TEST_CASE("sections of constant sheaves") {
  const SheafPtr d = constant(fx::two_points(), 2);
  CHECK(sections(*d, d->base().whole()).size() == 4);
  const SheafPtr s = constant(fx::sierpinski(), 2);
  CHECK(sections(*s, s->base().whole()).size() == 2);
  const auto empty = sections(*s, Subset{});
  REQUIRE(empty.size() == 1);
  CHECK(section_line(*s, empty[0]) == ":");
  CHECK(section_line(*s, sections(*s, Subset{1})[0]) == "a: a->a:0");
  CHECK(constant(fx::point(), 2)->total().size() == 2);
  CHECK(constant(fx::two_points(), 2)->total().opens().size() == 16);
  const SheafPtr sc = constant(fx::sierpinski(), 2);
  CHECK(sc->total().opens().size() == 9);
}

TEST_CASE("from_fibers_and_sections") {
  const SpacePtr pt = fx::point();
  const EtaleSheaf one = from_fibers_and_sections(pt, {{"m"}}, {Section{pt->whole(), {0}}});
  CHECK(one.total().size() == 1);

  const SheafPtr c = constant(fx::sierpinski(), 2);
  std::vector<std::vector<std::string>> fibers;
  for (std::size_t x = 0; x < 2; ++x) {
    fibers.emplace_back();
    for (std::size_t z : c->fiber_at(x)) fibers.back().push_back(c->total().name(z));
  }
  std::vector<Section> sigma;
  for (Subset u : c->base().opens()) {
    for (const Section& s : sections(*c, u)) sigma.push_back(s);
  }
  const SheafPtr rebuilt = share(from_fibers_and_sections(c->base_ptr(), fibers, sigma));
  CHECK(are_isomorphic(c, rebuilt).has_value());

  // Dropping every section through a:1 leaves that point uncovered.
  std::vector<Section> partial;
  for (const Section& s : sigma) {
    if (!s.image().contains(1)) partial.push_back(s);
  }
  CHECK(error_witness(ErrorCode::ConditionIIFails,
                      [&] { from_fibers_and_sections(c->base_ptr(), fibers, partial); }) == "a:1");
}

TEST_CASE("sheaf morphisms") {
  const SheafPtr c2 = constant(fx::two_points(), 2);
  const SheafPtr c1 = constant(fx::two_points(), 1);
  CHECK(is_isomorphism(identity_morphism(c2)));
  const auto collapse = validate_sheaf_morphism(c2, c1, {0, 0, 1, 1});
  CHECK_FALSE(is_isomorphism(collapse));
  error_witness(ErrorCode::TriangleFails, [&] { validate_sheaf_morphism(c2, c2, fiber_swap(*c2)); });

  const auto id = morphism_characterisations(*c2, *c2, ContinuousMap::identity(c2->total_ptr()));
  CHECK((id.commutes && id.maps_sections && id.local_sections));
  const auto moved = morphism_characterisations(
      *c2, *c2, ContinuousMap::validate(c2->total_ptr(), c2->total_ptr(), fiber_swap(*c2)));
  CHECK_FALSE(moved.commutes);
  CHECK_FALSE(moved.maps_sections);
  CHECK_FALSE(moved.local_sections);
  const auto col = morphism_characterisations(*c2, *c1, collapse.map());
  CHECK((col.commutes && col.maps_sections && col.local_sections));
}

TEST_CASE("restriction and isomorphism") {
  const SheafPtr s = constant(fx::sierpinski(), 2);
  const RestrictedSheaf ra = restrict_sheaf(*s, Subset{1});
  CHECK(ra.sheaf->base().size() == 1);
  CHECK(are_isomorphic(ra.sheaf, constant(ra.sheaf->base_ptr(), 2)).has_value());
  CHECK(*restrict_sheaf(*s, s->base().whole()).sheaf == *s);
  const RestrictedSheaf r0 = restrict_sheaf(*s, Subset{});
  CHECK(r0.sheaf->total().size() == 0);
  CHECK(r0.sheaf->base().size() == 0);

  const auto self = are_isomorphic(s, s);
  REQUIRE(self);
  CHECK(self->map() == ContinuousMap::identity(s->total_ptr()));
  CHECK_FALSE(are_isomorphic(constant(fx::sierpinski(), 2), constant(fx::sierpinski(), 3)).has_value());
}

TEST_CASE("property: section enumeration matches the fiber-choice oracle") {
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < 120; ++i) {
    const RandomInstance inst = random_instance(21, i, 4);
    const EtaleSheaf& sh = *inst.sheaf;
    for (Subset u : sh.base().opens()) {
      std::set<std::vector<std::size_t>> got;
      for (const Section& s : sections(sh, u)) {
        CHECK(is_section(sh, s));
        got.insert(s.values);
      }
      CHECK(got == oracle::sections(sh, u));
      ++pairs;
    }
    // The minimal-open local homeomorphism test agrees with the exhaustive one.
    for (std::size_t z = 0; z < sh.total().size(); ++z) {
      CHECK(local_homeomorphism_witness(sh.projection(), z).has_value());
    }
  }
  CHECK(pairs > 300);
}

TEST_CASE("property: constant sheaf section counts") {
  for (const auto& [name, space] : fx::spaces()) {
    for (std::size_t m = 1; m <= 3; ++m) {
      const SheafPtr c = constant(space, m);
      for (Subset u : space->opens()) {
        CHECK_MESSAGE(sections(*c, u).size() == ipow(m, oracle::components(*space, u).size()), name);
      }
    }
  }
}

TEST_CASE("property: random total spaces over a base") {
  // Random projections from random spaces; the validator accepts exactly the
  // surjective maps that pass the exhaustive local homeomorphism test with
  // discrete fibers.
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    Rng rng = stream_rng(33, i);
    const SpacePtr base = random_space(rng, 1 + i % 3, "x");
    const SpacePtr total = random_space(rng, 1 + i % 5, "z");
    std::vector<std::size_t> a(total->size());
    for (auto& v : a) v = uniform(rng, 0, base->size() - 1);
    if (discontinuity_by_opens(*total, *base, a)) continue;
    const ContinuousMap p = ContinuousMap::validate(total, base, a);
    bool surjective = p.image(total->whole()) == base->whole();
    bool local = true;
    for (std::size_t z = 0; z < total->size(); ++z) local = local && local_homeomorphism_witness(p, z).has_value();
    bool ok = true;
    try {
      validate_etale(total, base, p);
    } catch (const Error&) {
      ok = false;
    }
    CHECK(ok == (surjective && local));
    accepted += ok;
  }
  CHECK(accepted > 0);
}
