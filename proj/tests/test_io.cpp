#include "doctest.h"
#include "finsheaf/fixtures.hpp"
#include "finsheaf/functors.hpp"
#include "finsheaf/generate.hpp"
#include "finsheaf/io.hpp"
#include "helpers.hpp"

using namespace finsheaf;
namespace fx = finsheaf::fixtures;

namespace {

const std::string kData = FINSHEAF_DATA_DIR;

}  // namespace

TEST_CASE("parse fixture files") {
  CHECK(*load_space(kData + "/sierp.json") == *fx::sierpinski());
  CHECK(*load_space(kData + "/disc2.json") == *fx::two_points());
  CHECK(*load_space(kData + "/pt.json") == *fx::point());
  CHECK(*load_space(kData + "/mixed4.json") == *fx::mixed4());
  CHECK(parse_file(kData + "/P1.json").kind == ObjectKind::Presheaf);
  CHECK(parse_file(kData + "/disc2_to_pt.json").kind == ObjectKind::Map);
  CHECK(parse_file(kData + "/two_over_pt.json").kind == ObjectKind::Sheaf);
  CHECK(*load_sheaf(kData + "/const2_disc2.json") == constant_sheaf(fx::two_points(), fx::values(2)));
}

TEST_CASE("parse errors carry locations") {
  const std::string unknown = error_witness(ErrorCode::UnknownPoint, [] { load_space(kData + "/bad_unknown_point.json"); });
  CHECK(unknown.find("at /opens/2/1: c") != std::string::npos);

  const std::string syntax = error_witness(ErrorCode::SyntaxError, [] { load_space(kData + "/bad_syntax.json"); });
  CHECK(syntax.find("line 3, col 23") != std::string::npos);
  CHECK(error_witness(ErrorCode::SyntaxError, [] { parse_text("{\n  \"points\": [\n}"); }).rfind("line 3, col 1", 0) == 0);

  error_witness(ErrorCode::PathDependent, [] { load_presheaf(kData + "/P1_conflict.json"); });
  error_witness(ErrorCode::NotContinuous, [] { load_map(kData + "/sierp_to_disc2.json"); });
  error_witness(ErrorCode::NotLocalHomeo, [] { load_sheaf(kData + "/not_etale.json"); });
  error_witness(ErrorCode::InvalidFormat, [] { load_sheaf(kData + "/P1.json"); });
  CHECK(error_witness(ErrorCode::InvalidFormat, [] { parse_text(R"({"points": ["a"]})"); }).find("opens") !=
        std::string::npos);
}

TEST_CASE("round trips") {
  for (const auto& [name, space] : fx::spaces()) {
    CHECK_MESSAGE(*parse_text(serialize(*space)).space == *space, name);
  }
  for (const auto& [name, s] : fx::presheaves()) {
    CHECK_MESSAGE(*parse_text(serialize(*s)).presheaf == *s, name);
  }
  for (const auto& [name, s] : fx::sheaves()) {
    CHECK_MESSAGE(*parse_text(serialize(*s)).sheaf == *s, name);
  }
  const ContinuousMap f = load_map(kData + "/disc2_to_pt.json");
  CHECK(*parse_text(serialize(f)).map == f);

  for (std::size_t i = 0; i < 40; ++i) {
    const RandomInstance inst = random_instance(9, i, 5);
    CHECK(*parse_text(serialize(*inst.space)).space == *inst.space);
    CHECK(*parse_text(serialize(*inst.presheaf)).presheaf == *inst.presheaf);
    // Total spaces list every open; keep those small.
    if (inst.sheaf->total().size() <= 10) CHECK(*parse_text(serialize(*inst.sheaf)).sheaf == *inst.sheaf);
    if (inst.map) CHECK(*parse_text(serialize(*inst.map)).map == *inst.map);
    // Serialisation is a function of the object.
    CHECK(serialize(*parse_text(serialize(*inst.presheaf)).presheaf) == serialize(*inst.presheaf));
  }
}
