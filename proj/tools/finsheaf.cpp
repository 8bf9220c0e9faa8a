// Command-line front end: validation, stalks, sheafification, sections,
// completeness checks, change of base and the theorem harness.
//
// Exit codes: 0 valid / holds, 1 property fails, 2 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "finsheaf/functors.hpp"
#include "finsheaf/io.hpp"
#include "finsheaf/theorems.hpp"

namespace {

using namespace finsheaf;

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kInputError = 2;
constexpr std::size_t kRecommendedPoints = 8;

void warn_size(const FiniteSpace& space) {
  if (space.size() > kRecommendedPoints) {
    std::cerr << "warning: " << space.size() << " points exceed the recommended " << kRecommendedPoints << "\n";
  }
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return kHolds;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kInputError;
  }
  out << text;
  return kHolds;
}

int cmd_validate(const std::string& path) {
  const Loaded l = parse_file(path);
  std::cout << "ok: " << to_string(l.kind);
  switch (l.kind) {
    case ObjectKind::Space:
      warn_size(*l.space);
      std::cout << " with " << l.space->size() << " points and " << l.space->opens().size() << " opens";
      break;
    case ObjectKind::Map:
      std::cout << " from " << l.map->domain().size() << " to " << l.map->codomain().size() << " points";
      break;
    case ObjectKind::Presheaf:
      warn_size(l.presheaf->base());
      std::cout << " over " << l.presheaf->base().size() << " points";
      break;
    case ObjectKind::Sheaf:
      warn_size(l.sheaf->base());
      std::cout << " with " << l.sheaf->total().size() << " total points over " << l.sheaf->base().size();
      break;
  }
  std::cout << "\n";
  return kHolds;
}

int cmd_stalks(const std::string& path, bool dump_limits) {
  const PresheafPtr s = load_presheaf(path);
  const FiniteSpace& base = s->base();
  for (std::size_t x = 0; x < base.size(); ++x) {
    const Stalk st = stalk(*s, x);
    const auto& reps = s->elements(base.min_open(x));
    std::cout << base.name(x) << " (" << st.size() << "):";
    for (std::size_t c = 0; c < st.size(); ++c) std::cout << (c ? ", " : " ") << reps[st.rep_of_class[c]];
    std::cout << "\n";
    if (dump_limits) std::cout << dump(st.system, st.limit);
  }
  return kHolds;
}

int cmd_sections(const std::string& path, const std::optional<std::string>& open) {
  const SheafPtr sheaf = load_sheaf(path);
  std::vector<Subset> opens;
  if (open) {
    const Subset u = sheaf->base().parse_open_name(*open);
    if (!sheaf->base().is_open(u)) fail(ErrorCode::NotOpen, "{" + *open + "}");
    opens.push_back(u);
  } else {
    opens = sheaf->base().opens();
  }
  for (Subset u : opens) {
    for (const Section& s : sections(*sheaf, u)) std::cout << section_line(*sheaf, s) << "\n";
  }
  return kHolds;
}

int cmd_check(const std::string& property, const std::string& path) {
  const PresheafPtr s = load_presheaf(path);
  std::optional<std::string> witness;
  if (property == "s1" || property == "complete") {
    if (auto f = check_s1(*s).failure) witness = "S1 " + describe(*s, *f);
  }
  if ((property == "s2" || property == "complete") && !witness) {
    if (auto f = check_s2(*s).failure) witness = "S2 " + describe(*s, *f);
  }
  if (property == "flabby") {
    if (auto f = is_flabby(*s).failure) witness = describe(*s, *f);
  }
  if (witness) {
    std::cout << "fails: " << *witness << "\n";
    return kFails;
  }
  std::cout << "holds\n";
  return kHolds;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FINSHEAF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring FINSHEAF_SEED=" << env << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sheaves and presheaves on finite topological spaces"};
  app.require_subcommand(1);

  std::string file, out_path, map_path, property;
  std::optional<std::string> open;
  bool dump_limits = false;

  auto* validate = app.add_subcommand("validate", "Validate a space, map, presheaf or sheaf file");
  validate->add_option("file", file)->required();

  auto* stalks = app.add_subcommand("stalks", "Stalks of a presheaf by canonical representatives");
  stalks->add_option("presheaf", file)->required();
  stalks->add_flag("--dump", dump_limits, "Also print each direct limit");

  auto* sheafify_cmd = app.add_subcommand("sheafify", "Sheaf of germs of a presheaf");
  sheafify_cmd->add_option("presheaf", file)->required();
  sheafify_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

  auto* sections_cmd = app.add_subcommand("sections", "List sections of a sheaf");
  sections_cmd->add_option("sheaf", file)->required();
  sections_cmd->add_option("-U,--open", open, "Only this open, by canonical name");

  auto* check = app.add_subcommand("check", "Check s1, s2, complete or flabby");
  check->add_option("property", property)->required()->check(CLI::IsMember({"s1", "s2", "complete", "flabby"}));
  check->add_option("presheaf", file)->required();

  auto* pushforward = app.add_subcommand("pushforward", "Push a sheaf forward along a map");
  pushforward->add_option("-f,--map", map_path)->required();
  pushforward->add_option("sheaf", file)->required();
  pushforward->add_option("-o,--output", out_path, "Output file (default stdout)");

  auto* pullback = app.add_subcommand("pullback", "Pull a sheaf back along a map");
  pullback->add_option("-f,--map", map_path)->required();
  pullback->add_option("sheaf", file)->required();
  pullback->add_option("-o,--output", out_path, "Output file (default stdout)");

  SuiteOptions suite;
  suite.seed = default_seed();
  bool json = false, no_fixtures = false;
  auto* theorems = app.add_subcommand("theorems", "Run the theorem checks on fixtures and random instances");
  theorems->add_option("--seed", suite.seed, "Random seed (default $FINSHEAF_SEED or 0)");
  theorems->add_option("--count", suite.count, "Random instances")->capture_default_str();
  theorems->add_option("--max-points", suite.max_points, "Points per random space, at most 6")->capture_default_str();
  theorems->add_flag("--json", json, "Machine-readable report");
  theorems->add_flag("--timing", suite.timing, "Record wall time per check");
  theorems->add_flag("--no-fixtures", no_fixtures, "Skip the fixture checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kHolds : kInputError;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*stalks) return cmd_stalks(file, dump_limits);
    if (*sheafify_cmd) return emit(serialize(*sheafify(load_presheaf(file)).sheaf), out_path);
    if (*sections_cmd) return cmd_sections(file, open);
    if (*check) return cmd_check(property, file);
    if (*pushforward) {
      const ContinuousMap f = load_map(map_path);
      return emit(serialize(pushforward_sheaf(f, load_sheaf(file))), out_path);
    }
    if (*pullback) {
      const ContinuousMap f = load_map(map_path);
      return emit(serialize(*pullback_sheaf(f, load_sheaf(file)).sheaf), out_path);
    }
    if (*theorems) {
      suite.fixtures = !no_fixtures;
      if (suite.max_points < 1 || suite.max_points > kMaxGeneratedPoints) {
        fail(ErrorCode::GenerationExhausted, "--max-points must lie in [1, " + std::to_string(kMaxGeneratedPoints) + "]");
      }
      const auto reports = theorem_suite(suite);
      std::cout << (json ? format_json(reports) : format_text(reports));
      return all_hold(reports) ? kHolds : kFails;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
