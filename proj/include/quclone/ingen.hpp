#pragma once

// Diagonalization against the enumerated generator family.
//
// A config fixes a length map ell(n), a generation threshold q(n), and a
// schedule step -> (generator index, budget). Step t contributes the set
// S_{t,n} of length-ell(n) strings that generator t emits from the empty
// input with probability at least q(n), subject to its budget at n. The
// diagonal sequence takes, at each n, the lexicographically least string
// avoiding every S_{t,n} with t <= n. The counting bound
// |union| <= (n+1)/q(n) < 2^ell(n) keeps that choice possible; it is
// asserted on every run.

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quclone/codec.hpp"

namespace quclone {

// alpha walks 0,0,1,0,1,2,...; beta repeats each m exactly m+1 times.
std::pair<std::uint64_t, std::uint64_t> alpha_beta(std::uint64_t n);

struct IngenConfig {
    int ell_cap = 16;
    std::function<int(std::uint64_t)> ell;
    std::function<double(std::uint64_t)> q;
    std::function<std::pair<std::uint64_t, BudgetSchedule>(std::uint64_t)> schedule;
    SimLimits limits = default_limits();
};

// Default config: q(n) = (n+2) * 2^-ell(n), schedule from alpha_beta.
IngenConfig default_ingen_config(std::function<int(std::uint64_t)> ell);

// Throws std::invalid_argument if ell or q break the supported ranges
// (ell outside [0, ell_cap] or q(n) * 2^ell(n) <= n+1) anywhere on [0, N].
void validate_config(const IngenConfig& cfg, std::uint64_t horizon);

// Strings of length ell(n) that schedule step t generates at index n.
// Empty when the decoded generator is not a (0, ell(n))-circuit or its
// budget at n does not cover the generator's gate cost. Ties at exactly
// q(n) count as generated (a 1e-12 guard absorbs float error).
std::vector<Bits> compute_S(std::uint64_t t, std::uint64_t n, const IngenConfig& cfg);

struct SetAudit {
    std::uint64_t t = 0;
    std::uint64_t generator_index = 0;
    bool arity_ok = false;
    bool budget_ok = false;
    std::uint64_t size = 0;
};

struct EntryAudit {
    std::uint64_t n = 0;
    std::uint64_t union_size = 0;
    std::uint64_t rank = 0;  // entries lexicographically below the chosen one
    std::vector<SetAudit> sets;
};

struct SequencePrefix {
    std::vector<Bits> entries;
    std::vector<EntryAudit> audits;
    IngenConfig config;
    std::uint64_t fingerprint = 0;
};

// Builds entries s_0..s_N. Deterministic given the config. Asserts the
// counting bound at every index and throws std::logic_error if it ever
// fails to leave room.
SequencePrefix diagonalize(const IngenConfig& cfg, std::uint64_t horizon);

struct WitnessEntry {
    std::uint64_t n = 0;
    bool arity_ok = false;
    bool budget_ok = false;
    double probability = 0.0;  // of emitting s_n, when applicable
    double threshold = 0.0;
    bool generated = false;
};

struct WitnessReport {
    std::uint64_t t = 0;
    std::vector<WitnessEntry> entries;  // one per n in the prefix
    bool all_pass = true;               // no applicable n >= t generated s_n
};

// Recheck the prefix against schedule step t. Report-only: entries below
// t are included (a planted generator shows up there) but do not affect
// all_pass.
WitnessReport witness_check(const SequencePrefix& prefix, std::uint64_t t);

// First bit of each nonempty entry forced to 0; audits are kept verbatim
// (they describe the original construction), ranks recomputed.
SequencePrefix zero_leading(const SequencePrefix& prefix);

// Exact (1/2)||rho (x) rho - C(rho)||_tr for an (n, 2n)-circuit C.
double clone_deficiency(const Circuit& c, const DensityState& rho,
                        const SimLimits& limits = default_limits());

// n-qubit copier: n fresh wires, then a controlled-X from each input
// wire onto its partner.
Circuit transversal_copier(int n);

nlohmann::json prefix_to_json(const SequencePrefix& prefix);

}  // namespace quclone
