#pragma once

// Cloning and monogamy games over conjugate-coded states.
//
// The cloning game hands an adversary channel one of the four (per
// qubit) code states and scores the fidelity of its two-copy output
// against the doubled input. The monogamy game splits a state between
// two guessers who both learn the basis afterwards and must both name
// the encoded string. Exact evaluation enumerates all (x, theta) pairs;
// wrapper circuits reduce either game value to a single-output circuit
// identity; solvers certify the cloning bound numerically and chase the
// monogamy value from below.

#include <cstdint>
#include <functional>
#include <string>

#include <json.hpp>

#include "quclone/channel.hpp"
#include "quclone/compile.hpp"
#include "quclone/ingen.hpp"
#include "quclone/sdp.hpp"

namespace quclone {

struct CloningAttack {
    ChoiChannel channel;  // n -> 2n qubits
};

struct MoEStrategy {
    ChoiChannel splitter;  // n -> b_wires + c_wires qubits
    ChoiChannel bob;       // n (basis register) + b_wires -> n
    ChoiChannel charlie;   // c_wires + n (basis register) -> n
    int b_wires = 0;
    int c_wires = 0;

    void validate(int n) const;
};

struct GameValueReport {
    double value = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // bound - value
    std::string method;   // exact | sdp | see-saw | monte-carlo
    std::uint64_t seed = 0;
    int iterations = 0;
    bool converged = true;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    double feas_psd = 0.0;
    double feas_tp = 0.0;
};

nlohmann::json report_to_json(const GameValueReport& r);

// Exact average cloning fidelity over all 4^n (x, theta) pairs. n <= 3.
double eval_cloning(const CloningAttack& attack, int n,
                    const SimLimits& limits = default_limits());

double cloning_bound(int n);  // (3/4)^n

// Monte-Carlo estimate over uniformly drawn (x, theta), term values
// exact and cached. For n beyond the exact-path cap.
GameValueReport eval_cloning_mc(const CloningAttack& attack, int n, std::uint64_t seed,
                                std::uint64_t samples = 100000,
                                const SimLimits& limits = default_limits());

// Builtin attacks.
CloningAttack measure_duplicate_attack(int n);  // measure, write twice
CloningAttack keep_append_attack(int n);        // identity (x) |0><0|

// Numerical certificate that 3/4 is attained at n = 1: projected
// gradient over Choi matrices from the measure-duplicate start.
GameValueReport optimal_cloning_sdp(int n = 1, double tol = 1e-8, int max_iters = 5000);

// Exact monogamy winning probability over all (x, theta). n <= 2.
double eval_moe(const MoEStrategy& strategy, int n,
                const SimLimits& limits = default_limits());

double moe_bound(int n);  // (1/2 + 1/(2 sqrt 2))^n

GameValueReport eval_moe_mc(const MoEStrategy& strategy, int n, std::uint64_t seed,
                            std::uint64_t samples = 100000,
                            const SimLimits& limits = default_limits());

// Builtin strategies (product form over qubits).
MoEStrategy breidbart_strategy(int n);       // intermediate-basis measure + broadcast
MoEStrategy forward_to_bob_strategy(int n);  // Bob decodes perfectly, Charlie says 0^n

// Coordinate ascent on (splitter, Bob's per-basis measurement, Charlie's
// per-basis measurement) at n = 1. Returns the best over `seeds` Haar
// initializations; the report's iterations count full rounds of the
// best run.
GameValueReport see_saw_moe(std::uint64_t seed = 1, int rounds = 40, int seeds = 5);

// Per-round values of a single see-saw run (for monotonicity checks).
std::vector<double> see_saw_moe_trace(std::uint64_t seed, int rounds);

// (2n, 1)-circuit whose acceptance probability on input x||theta equals
// the cloning fidelity term of `attack` (an (n, 2n)-circuit) at that
// (x, theta).
Circuit build_money_wrapper(const Circuit& attack, int n);

// (2*lambda, 1)-circuit computing the monogamy win term of the strategy
// given as circuits: a (lambda -> b+c), b (lambda+b -> lambda),
// c (c+lambda -> lambda).
Circuit build_tfkw_wrapper(const Circuit& a, const Circuit& b, const Circuit& c,
                           int b_wires, int c_wires, int lambda);

// Builtin strategies compiled to circuits (for the wrapper identities).
struct MoECircuits {
    Circuit a, b, c;
    int b_wires = 0, c_wires = 0;
};
MoECircuits breidbart_circuits();       // lambda = 1
MoECircuits forward_to_bob_circuits();  // lambda = 1

// Average of <1|C~(x||theta)|1> over all inputs; the wrapper identity
// says this equals the game value of the wrapped attack or strategy.
double wrapper_average(const Circuit& wrapper, int total_input_bits,
                       const SimLimits& limits = default_limits());

// Checks <1|C_n(s_n)|1> <= p(n) * (2^-ell(n) + E_x <1|C_n(x)|1>)
// exactly for each n in [0, prefix size). Report-only.
struct DerandRow {
    std::uint64_t n = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};
std::vector<DerandRow> derandomization_check(
    const std::function<Circuit(std::uint64_t)>& family, const SequencePrefix& prefix,
    const std::function<double(std::uint64_t)>& p, const SimLimits& limits = default_limits());

}  // namespace quclone
