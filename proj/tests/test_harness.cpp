#include "doctest.h"
#include "finsheaf/generate.hpp"
#include "finsheaf/io.hpp"
#include "finsheaf/theorems.hpp"
#include "helpers.hpp"
#include "json.hpp"

using namespace finsheaf;

TEST_CASE("generator bounds and the one-point case") {
  const auto one = gen_random_instances(0, 1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].space->size() == 1);
  CHECK(one[0].presheaf->base().size() == 1);
  CHECK(one[0].name == "random/0/0");
  error_witness(ErrorCode::GenerationExhausted, [] { random_instance(0, 0, 7); });
  error_witness(ErrorCode::GenerationExhausted, [] { random_instance(0, 0, 0); });
}

TEST_CASE("generator is deterministic per seed") {
  for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
    const auto a = gen_random_instances(seed, 15, 5);
    const auto b = gen_random_instances(seed, 15, 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(serialize(*a[i].presheaf) == serialize(*b[i].presheaf));
      CHECK(*a[i].sheaf == *b[i].sheaf);
      CHECK(a[i].map.has_value() == b[i].map.has_value());
      if (a[i].map) CHECK(*a[i].map == *b[i].map);
    }
  }
  // Item i does not depend on how many items precede it.
  CHECK(serialize(*random_instance(4, 9, 4).presheaf) == serialize(*gen_random_instances(4, 10, 4)[9].presheaf));
}

TEST_CASE("generated objects validate") {
  for (std::size_t i = 0; i < 100; ++i) {
    const RandomInstance inst = random_instance(2, i, 6);
    CHECK(inst.space->size() <= kMaxGeneratedPoints);
    for (std::size_t ui = 0; ui < inst.presheaf->open_count(); ++ui) {
      CHECK(inst.presheaf->elements_at(ui).size() <= kMaxGeneratedSectionSet);
    }
    // Re-validation from the serialised form succeeds.
    CHECK_NOTHROW(parse_text(serialize(*inst.presheaf)));
    if (inst.sheaf->total().size() <= 10) CHECK_NOTHROW(parse_text(serialize(*inst.sheaf)));
    if (inst.map) CHECK_NOTHROW(ContinuousMap::validate(inst.map->domain_ptr(), inst.map->codomain_ptr(),
                                                        inst.map->assignment()));
  }
}

TEST_CASE("suite output is deterministic and well formed") {
  SuiteOptions opt;
  opt.seed = 7;
  opt.count = 5;
  const auto a = theorem_suite(opt);
  const auto b = theorem_suite(opt);
  CHECK(format_text(a) == format_text(b));
  CHECK(format_json(a) == format_json(b));
  CHECK(all_hold(a));

  const auto j = nlohmann::json::parse(format_json(a));
  REQUIRE(j.is_array());
  CHECK(j.size() == a.size());
  for (const auto& r : j) {
    CHECK(r.contains("check"));
    CHECK(r.contains("instance"));
    CHECK(r.contains("verdict"));
    CHECK(r.contains("witness"));
    CHECK(r.contains("millis"));
  }
  const std::string text = format_text(a);
  CHECK(text.find(std::to_string(a.size()) + " checks:") != std::string::npos);
}

TEST_CASE("random instances each get the same suite") {
  SuiteOptions opt;
  opt.seed = 7;
  opt.count = 50;
  opt.fixtures = false;
  const auto reports = theorem_suite(opt);
  std::map<std::string, std::size_t> per_instance;
  for (const auto& r : reports) {
    if (r.instance.rfind("random/", 0) == 0) per_instance[r.instance]++;
  }
  CHECK(per_instance.size() == 50);
  CHECK(all_hold(reports));
}

TEST_CASE("run_check classification") {
  CHECK(run_check("c", "i", [] { return std::optional<std::string>{}; }, false).verdict == Outcome::Holds);
  const auto f = run_check("c", "i", [] { return std::optional<std::string>{"w"}; }, false);
  CHECK(f.verdict == Outcome::Fails);
  CHECK(f.witness == "w");
  CHECK(run_check("c", "i", []() -> std::optional<std::string> { fail(ErrorCode::TooLarge, "x"); }, false).verdict ==
        Outcome::Skipped);
  CHECK(run_check("c", "i", []() -> std::optional<std::string> { fail(ErrorCode::TheoremViolation, "x"); }, false)
            .verdict == Outcome::Fails);
  CHECK(run_check("c", "i", []() -> std::optional<std::string> { fail(ErrorCode::NotOpen, "x"); }, false).verdict ==
        Outcome::Error);
}

TEST_CASE("fixture verdict table") {
  for (const auto& r : fixture_verdict_checks(false)) CHECK_MESSAGE(r.verdict == Outcome::Holds, r.instance << " " << r.witness);
}
