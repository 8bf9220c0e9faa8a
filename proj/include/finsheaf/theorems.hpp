#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "finsheaf/etale.hpp"
#include "finsheaf/generate.hpp"
#include "finsheaf/presheaf.hpp"

namespace finsheaf {

enum class Outcome { Holds, Fails, Error, Skipped };

std::string to_string(Outcome v);

struct CheckReport {
  std::string check;
  std::string instance;
  Outcome verdict = Outcome::Holds;
  std::string witness;
  long long millis = 0;
};

/// A check returns nullopt when it holds and a witness otherwise. Library
/// errors become Error reports, except TooLarge and Inapplicable (Skipped)
/// and TheoremViolation (Fails).
using CheckFn = std::function<std::optional<std::string>()>;

CheckReport run_check(const std::string& check, const std::string& instance, const CheckFn& fn, bool timing);

/// Checks on a presheaf, and on its push-out along f when given.
std::vector<CheckReport> presheaf_checks(const std::string& instance, PresheafPtr s,
                                         const std::optional<ContinuousMap>& f, bool timing);
std::vector<CheckReport> sheaf_checks(const std::string& instance, SheafPtr sheaf, bool timing);
/// Pull-back of `sheaf` along f, and push-forward of `source` along f.
std::vector<CheckReport> change_of_base_checks(const std::string& instance, const ContinuousMap& f, SheafPtr source,
                                               SheafPtr sheaf, bool timing);
std::vector<CheckReport> system_checks(const std::string& instance, const RandomSystem& system, bool timing);
/// The documented verdict table of the four presheaf fixtures.
std::vector<CheckReport> fixture_verdict_checks(bool timing);

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t count = 10;
  std::size_t max_points = 4;
  bool fixtures = true;
  bool timing = false;
};

/// Fixtures followed by `count` random instances and `count` random
/// directed systems, in that order.
std::vector<CheckReport> theorem_suite(const SuiteOptions& options);

/// One line per report, then a summary line.
std::string format_text(const std::vector<CheckReport>& reports);
/// Array of {check, instance, verdict, witness, millis}.
std::string format_json(const std::vector<CheckReport>& reports);
/// No Fails and no Error verdicts.
bool all_hold(const std::vector<CheckReport>& reports);

}  // namespace finsheaf
