#pragma once

// Decision-to-search lifting. A decision oracle is a single-output
// circuit tabulated into acceptance probabilities p(x). Lifting runs
// the three-step search procedure: include each x in a set S with
// probability p(x) independently, then output a uniform element of S,
// or a uniform string when S came out empty. The exact path enumerates
// all 2^(2^n) subsets with their product weights; the sampler plays the
// procedure forward. The bound verifier checks, per target string s,
//   p(s) / (1 + sum_{x != s} p(x)) <= P[output = s].

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "quclone/circuit.hpp"

namespace quclone {

struct DecisionOracle {
    int n = 0;
    std::vector<double> p;  // indexed by bits_to_index, size 2^n

    static DecisionOracle from_table(int n, std::vector<double> p);
    // Tabulates <1|C(x)|1> for every input of an (n, 1)-circuit.
    static DecisionOracle from_circuit(const Circuit& c,
                                       const SimLimits& limits = default_limits());

    void validate() const;  // entries in [0, 1], size matches n
};

struct SearchDistribution {
    int n = 0;
    bool exact = true;
    std::vector<double> probs;           // exact mode, size 2^n
    std::vector<std::uint64_t> counts;   // sample mode histogram
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    double prob(std::uint64_t s) const;
    double total() const;  // 1 within 1e-9 in exact mode
};

// Exact output distribution via subset enumeration. Throws
// resource_error when n > 4.
SearchDistribution lift_exact(const DecisionOracle& oracle);

// Simulates the search procedure `samples` times.
SearchDistribution lift_sampled(const DecisionOracle& oracle, std::uint64_t seed,
                                std::uint64_t samples = 1000000);

// Exact when the subset cap allows it, sampled otherwise.
SearchDistribution lift(const DecisionOracle& oracle, std::uint64_t seed = 0,
                        std::uint64_t samples = 1000000);

struct SearchBoundRow {
    Bits s;
    double lhs = 0.0;  // p(s) / (1 + sum_{x != s} p(x))
    double rhs = 0.0;  // P[output = s]
    bool holds = false;
};

struct SearchBoundReport {
    int n = 0;
    std::vector<SearchBoundRow> rows;  // one per s, index order
    bool all_hold = false;
};

// Requires an exact distribution; report-only (never throws on a
// violated row).
SearchBoundReport verify_search_bound(const DecisionOracle& oracle,
                                      const SearchDistribution& dist);

nlohmann::json search_bound_report_to_json(const SearchBoundReport& r);

// Expected |S| under independent inclusion: the plain sum of the
// probabilities. Throws on entries outside [0, 1].
double expected_set_size(const std::vector<double>& p);

struct SetSizeCheck {
    double expected = 0.0;
    double empirical_mean = 0.0;
    double std_error = 0.0;
    bool within_4_sigma = false;
};

SetSizeCheck expected_set_size_check(const std::vector<double>& p, std::uint64_t seed,
                                     std::uint64_t samples = 200000);

}  // namespace quclone
