#pragma once

// The certification battery: ten criteria, each a bundle of numeric
// checks with pinned tolerances, runnable one at a time or as a suite.
// The smoke suite runs every criterion at its stated size; the full
// suite widens the randomized sweeps. Reports are deterministic given
// (suite, seed); wall times are collected but kept out of the canonical
// JSON so reruns are byte-identical.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quclone/common.hpp"

namespace quclone {

struct CheckLine {
    std::string name;
    std::string relation;  // "==", "<=", ">="
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CriterionOutcome {
    std::string id;
    std::string statement;
    std::vector<CheckLine> checks;
    bool pass = false;
    double wall_seconds = 0.0;  // excluded from canonical JSON
};

enum class Suite { smoke, full };

struct BatteryReport {
    Suite suite = Suite::smoke;
    std::uint64_t seed = 0;
    std::vector<CriterionOutcome> criteria;
    bool all_pass = false;
    double wall_seconds = 0.0;
};

// Battery order; run_criterion accepts exactly these ids.
const std::vector<std::string>& criterion_ids();

CriterionOutcome run_criterion(const std::string& id, Suite suite, std::uint64_t seed,
                               const SimLimits& limits = default_limits());

// Runs every criterion. `inject_failure` names a criterion whose verdict
// is forced to fail after evaluation; it exercises the failure-reporting
// path end to end without touching any measurement.
BatteryReport run_battery(Suite suite, std::uint64_t seed,
                          const std::optional<std::string>& inject_failure = std::nullopt,
                          const SimLimits& limits = default_limits());

nlohmann::json criterion_to_json(const CriterionOutcome& c, bool include_timings = false);
nlohmann::json battery_to_json(const BatteryReport& r, bool include_timings = false);

// "PASS cloning  3/3 checks  <headline>" style single line.
std::string format_criterion_line(const CriterionOutcome& c);

}  // namespace quclone
