#include "doctest.h"
#include "finsheaf/fixtures.hpp"
#include "finsheaf/generate.hpp"
#include "finsheaf/io.hpp"
#include "finsheaf/presheaf.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace finsheaf;
namespace fx = finsheaf::fixtures;

namespace {

Subset open(const Presheaf& s, const std::string& name) { return s.base().parse_open_name(name); }

PresheafPtr presheaf_text(const std::string& text) { return parse_text(text, FINSHEAF_DATA_DIR).presheaf; }

std::string name_of(const Presheaf& s, const std::string& u, std::size_t e) { return s.elements(open(s, u))[e]; }

}  // namespace

TEST_CASE("validate_presheaf on fixtures") {
  const PresheafPtr p1 = fx::p1();
  CHECK(p1->elements(open(*p1, "a")).size() == 2);
  CHECK(name_of(*p1, "a", p1->restriction(open(*p1, "a,b"), open(*p1, "a"))[0]) == "f");
  const PresheafPtr c2 = fx::const2();
  for (Subset u : c2->opens()) CHECK(c2->elements(u).size() == 2);

  RawPresheaf raw;
  raw.base = fx::sierpinski();
  raw.sections = {{Subset{}, {"*"}}, {Subset{1}, {"f", "g"}}, {Subset{3}, {"h"}}};
  raw.restrictions.push_back({Subset{3}, Subset{1}, {{"h", "f"}}});
  raw.restrictions.push_back({Subset{3}, Subset{1}, {{"h", "g"}}});
  error_witness(ErrorCode::PathDependent, [&] { validate_presheaf(raw); });

  RawPresheaf missing = raw;
  missing.sections.erase(Subset{1});
  error_witness(ErrorCode::MissingSectionSet, [&] { validate_presheaf(missing); });
}

TEST_CASE("file fixtures equal the built-in ones") {
  CHECK(*load_presheaf(FINSHEAF_DATA_DIR "/P1.json") == *fx::p1());
  CHECK(*load_presheaf(FINSHEAF_DATA_DIR "/CONST2.json") == *fx::const2());
  CHECK(*load_presheaf(FINSHEAF_DATA_DIR "/GLUEFAIL.json") == *fx::gluefail());
  CHECK(*load_presheaf(FINSHEAF_DATA_DIR "/S1FAIL.json") == *fx::s1fail());
}

TEST_CASE("restrict_presheaf") {
  const PresheafPtr p1 = fx::p1();
  const Presheaf r = restrict_presheaf(*p1, open(*p1, "a"));
  CHECK(r.base().size() == 1);
  CHECK(r.opens().size() == 2);
  CHECK(r.elements(r.base().whole()) == std::vector<std::string>{"f", "g"});
  CHECK(r.elements(Subset{}) == std::vector<std::string>{"*"});
  CHECK(restrict_presheaf(*p1, p1->base().whole()) == *p1);
  const Presheaf c = restrict_presheaf(*fx::const2(), open(*fx::const2(), "p"));
  CHECK(c.elements(c.base().whole()).size() == 2);
}

TEST_CASE("stalks and germs") {
  const PresheafPtr p1 = fx::p1();
  const Stalk sa = stalk(*p1, "a");
  CHECK(sa.size() == 2);
  CHECK(stalk(*p1, "b").size() == 1);
  CHECK(stalk(*fx::const2(), "p").size() == 2);

  const Germ gh = germ(*p1, p1->base().whole(), "h", "a");
  CHECK(name_of(*p1, "a", gh.rep) == "f");
  CHECK(name_of(*p1, "a", germ(*p1, open(*p1, "a"), "g", "a").rep) == "g");
  const PresheafPtr c2 = fx::const2();
  CHECK(name_of(*c2, "q", germ(*c2, c2->base().whole(), "1", "q").rep) == "1");
  error_witness(ErrorCode::PointNotInOpen, [&] { germ(*p1, open(*p1, "a"), "g", "b"); });
}

TEST_CASE("morphisms") {
  const PresheafPtr p1 = fx::p1();
  const auto id = identity_morphism(p1);
  CHECK(classify_morphism(id) == MorphismClass{true, true, true});

  std::map<Subset, std::map<std::string, std::string>> swap;
  swap[Subset{}] = {{"*", "*"}};
  swap[open(*p1, "a")] = {{"f", "g"}, {"g", "f"}};
  swap[open(*p1, "a,b")] = {{"h", "h"}};
  CHECK(error_witness(ErrorCode::SquareFails, [&] { validate_morphism(p1, p1, swap); }).find("h") !=
        std::string::npos);

  const PresheafPtr c2 = fx::const2();
  const PresheafPtr c1 = presheaf_text(R"({"space": "disc2.json",
    "sections": {"": ["0"], "p": ["0"], "q": ["0"], "p,q": ["0"]}})");
  std::vector<std::vector<std::size_t>> collapse(c2->open_count(), {0, 0});
  const auto m = validate_morphism(c2, c1, collapse);
  CHECK(classify_morphism(m) == MorphismClass{false, true, false});
  const auto fold = validate_morphism(c2, c2, collapse);
  CHECK(classify_morphism(fold) == MorphismClass{false, false, false});
  CHECK(compose(fold, fold) == fold);
  CHECK(compose(m, fold) == m);
  CHECK(compose(id, id) == id);

  // Inclusion of the sub-presheaf with S'(p) = {0}.
  const PresheafPtr sub = presheaf_text(R"({"space": "disc2.json",
    "sections": {"": ["0", "1"], "p": ["0"], "q": ["0", "1"], "p,q": ["0"]},
    "restrictions": {"p,q->p": {"0": "0"}, "p,q->q": {"0": "0"}, "p->": {"0": "0"}, "q->": {"0": "0", "1": "1"}}})");
  std::map<Subset, std::map<std::string, std::string>> inc;
  for (Subset u : sub->opens()) {
    for (const auto& e : sub->elements(u)) inc[u][e] = e;
  }
  CHECK(classify_morphism(validate_morphism(sub, c2, inc)) == MorphismClass{true, false, false});
}

TEST_CASE("completeness verdicts and witnesses") {
  const PresheafPtr s1fail = fx::s1fail();
  const auto f1 = check_s1(*s1fail).failure;
  REQUIRE(f1);
  CHECK(f1->open == s1fail->base().whole());
  CHECK(f1->cover == std::vector<Subset>{Subset{1}, Subset{2}});
  CHECK(check_s1(*fx::p1()).holds());

  const auto c1 = check_s1(*fx::const2()).failure;
  REQUIRE(c1);
  CHECK(c1->open.empty());
  CHECK(c1->cover.empty());
  CHECK(c1->first == 0);
  CHECK(c1->second == 1);

  const PresheafPtr glue = fx::gluefail();
  const auto g = check_s2(*glue).failure;
  REQUIRE(g);
  CHECK(g->cover == std::vector<Subset>{Subset{1}, Subset{2}});
  // The witness replays: compatible and without a gluing.
  CHECK(is_compatible(*glue, g->cover, g->family));
  CHECK(gluings(*glue, g->open, g->cover, g->family).empty());
  // (1, 1) is another family without a gluing; (0, 0) glues to c.
  CHECK(gluings(*glue, g->open, g->cover, {1, 1}).empty());
  CHECK(gluings(*glue, g->open, g->cover, {0, 0}).size() == 1);

  CHECK(check_s2(*fx::p1()).holds());
  CHECK(check_s2(*s1fail).holds());
  CHECK(is_complete(*fx::p1()));
  CHECK_FALSE(is_complete(*fx::const2()));
  CHECK_FALSE(is_complete(*s1fail));
  CHECK_FALSE(is_complete(*glue));

  const auto fl = is_flabby(*fx::p1()).failure;
  REQUIRE(fl);
  CHECK(fl->from == fx::p1()->base().whole());
  CHECK(fl->to == Subset{1});
  CHECK(name_of(*fx::p1(), "a", fl->missed) == "g");
  CHECK(is_flabby(*s1fail).holds());
  CHECK(is_flabby(*fx::const2()).holds());
}

TEST_CASE("open covers") {
  const FiniteSpace& d = *fx::two_points();
  CHECK(open_covers(d, Subset{}) == std::vector<std::vector<Subset>>{{}});
  const auto anti = open_covers(d, d.whole());
  CHECK(anti.size() == 1);
  const auto all = open_covers(d, d.whole(), {CoverEnumeration::AllSubsets, true});
  CHECK(all.size() == oracle::covers(d, d.whole()).size());
}

TEST_CASE("property: random presheaves against the brute-force predicates") {
  std::size_t complete = 0, incomplete = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    Rng rng = stream_rng(5, i);
    const SpacePtr sp = random_space(rng, 1 + i % 4, "x");
    const PresheafPtr s = random_presheaf(rng, sp);
    CHECK(check_s1(*s).holds() == oracle::s1(*s));
    CHECK(check_s2(*s).holds() == oracle::s2(*s));
    CHECK(is_flabby(*s).holds() == oracle::flabby(*s));
    CHECK(check_s1(*s, {CoverEnumeration::AllSubsets, true}).holds() == oracle::s1(*s));
    CHECK(check_s2(*s, {CoverEnumeration::AllSubsets, true}).holds() == oracle::s2(*s));
    (is_complete(*s) ? complete : incomplete)++;
    // Every stalk is in bijection with S(min_open(x)).
    for (std::size_t x = 0; x < sp->size(); ++x) {
      const Stalk st = stalk(*s, x);
      CHECK(st.size() == s->elements(sp->min_open(x)).size());
    }
    // Every failure witness replays.
    if (auto f = check_s1(*s).failure) {
      for (Subset v : f->cover) CHECK(s->restriction(f->open, v)[f->first] == s->restriction(f->open, v)[f->second]);
      CHECK(f->first != f->second);
    }
    if (auto f = check_s2(*s).failure) {
      CHECK(is_compatible(*s, f->cover, f->family));
      CHECK(gluings(*s, f->open, f->cover, f->family).empty());
    }
  }
  CHECK(complete > 0);
  CHECK(incomplete > 0);
}
