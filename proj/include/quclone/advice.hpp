#pragma once

// Promise problems whose advice is a conjugate-coded string, and the
// harness around them: instance sampling, the honest decoder circuit,
// split-and-guess attack evaluation, a copy-protection game evaluator,
// the derived two-sided language, and the polynomial slowdown maps used
// to retarget a scheme at a smaller security parameter.
//
// The promise problem is parameterized by one planted pair (x, theta)
// per length: a string of even length 2*lambda is an instance exactly
// when it reads (theta_lambda, y), and its answer bit is x_lambda . y.
// Everything of odd length, or carrying the wrong theta prefix, or
// longer than the planted table, sits outside the promise.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quclone/channel.hpp"
#include "quclone/circuit.hpp"
#include "quclone/ingen.hpp"

namespace quclone {

// --- planted pair table ---------------------------------------------------

struct PromiseSpec {
    struct Entry {
        Bits x;
        Bits theta;
    };
    // entries[lambda] holds the pair for that lambda; |x| = |theta| = lambda.
    // Entry 0 is the empty pair.
    std::vector<Entry> entries;

    std::uint64_t max_lambda() const {
        return entries.empty() ? 0 : static_cast<std::uint64_t>(entries.size()) - 1;
    }
    void validate() const;
};

// Parses each diagonalized entry (which must have length 2n, so the source
// config needs ell(n) = 2n) into x_n followed by theta_n.
PromiseSpec spec_from_prefix(const SequencePrefix& prefix);

// {"entries": [{"lambda": 1, "x": "1", "theta": "0"}, ...]}; lambdas must be
// contiguous from 1. Entry 0 is implicit.
PromiseSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const PromiseSpec& spec);

// Smallest lambda0 such that x_lambda != 0^lambda for every lambda in
// [lambda0, max_lambda]; max_lambda + 1 when the last entry is all zero.
// Entry 0 is vacuously zero, so the result is at least 1.
std::uint64_t all_nonzero_from(const PromiseSpec& spec);

// Advice for instances of length 2*lambda: x_lambda conjugate-coded with
// bases theta_lambda.
PureState advice_state(const PromiseSpec& spec, std::uint64_t lambda);

// --- membership and instance sampling --------------------------------------

enum class Membership { Yes, No, OutsidePromise };

Membership promise_membership(const PromiseSpec& spec, const Bits& w);

// Explicit finite support of the instance distribution at length n: uniform
// over each populated side, with the side weight k = 1/2 when both sides are
// populated and k = 1 when only one is.
struct InstanceDistribution {
    std::uint64_t n = 0;
    double k = 0.0;
    std::vector<Bits> yes;  // lexicographic
    std::vector<Bits> no;   // lexicographic
    double prob(const Bits& w) const;
};

// Enumerates both sides. Throws std::invalid_argument when no instance of
// length n exists (odd n, or lambda beyond the table) and resource_error
// when 2^lambda strings will not fit in memory (lambda > 16).
InstanceDistribution promise_distribution(const PromiseSpec& spec, std::uint64_t n);

// One draw from the distribution above, without enumerating it: the answer
// bit is drawn with the side weights, then y is drawn uniformly on the
// matching side by fixing the parity at the highest set bit of x.
Bits sample_instance(const PromiseSpec& spec, std::uint64_t n, std::mt19937_64& rng);
Bits sample_instance(const PromiseSpec& spec, std::uint64_t n, std::uint64_t seed);

// --- honest decoder ---------------------------------------------------------

// The decoder family, one circuit per total bit length nu. Odd nu: discard
// everything and answer 0. Even nu = 2*lambda: inputs are
// [advice (lambda)][theta (lambda)][y (lambda)]; undo the conjugate coding
// with a controlled Hadamard per qubit, Toffoli the advice-y inner product
// into a fresh result wire, and discard the rest. Capped at nu <= 8.
Circuit build_honest_circuit(int nu);

// --- split-and-guess attacks ------------------------------------------------

// A splits the advice between B and C; each guesser then answers its own
// instance. B's input is the instance followed by its share, C's input is
// its share followed by the instance; both output one wire whose measured
// bit is the answer guess.
struct SplitAttack {
    ChoiChannel splitter;  // lambda -> b_wires + c_wires
    ChoiChannel bob;       // 2*lambda + b_wires -> 1
    ChoiChannel charlie;   // c_wires + 2*lambda -> 1
    int b_wires = 0;
    int c_wires = 0;

    void validate(std::uint64_t lambda) const;
};

struct SplitAttackResult {
    double value = 0.0;
    std::string method;  // exact | monte-carlo
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    double std_error = 0.0;
};

// Probability that both guessers answer their own instance correctly, with
// the two instances drawn independently at length 2*lambda. Exact for
// lambda <= 2 (seed and samples ignored); Monte-Carlo over instance pairs
// beyond that, with per-pair terms exact and cached. Pipeline dimension is
// capped at 12 wires.
SplitAttackResult eval_split_attack(const PromiseSpec& spec, const SplitAttack& attack,
                                    std::uint64_t lambda, std::uint64_t seed = 1,
                                    std::uint64_t samples = 4096,
                                    const SimLimits& limits = default_limits());

// B receives the whole advice register and decodes honestly; C answers with
// a fresh uniform bit.
SplitAttack forward_to_bob_split(std::uint64_t lambda);

// Nothing is shared and both guessers answer 1 unconditionally.
SplitAttack both_output_one_split(std::uint64_t lambda);

// A measures the advice computationally and hands both guessers the same
// outcome; each treats it as x and answers outcome . y.
SplitAttack measure_and_share_split(std::uint64_t lambda);

// --- copy-protection game ---------------------------------------------------

// Keyed map with an explicit domain: std::nullopt marks (key, x) pairs the
// map is not defined on. The all-nullopt map is allowed.
using KeyedMap = std::function<std::optional<Bits>(const Bits& key, const Bits& x)>;

struct CPScheme {
    int kappa = 0;  // key bits
    int d = 0;      // challenge bits
    int c = 0;      // answer bits
    int q = 0;      // program wires
    std::function<DensityState(const Bits& key)> generate;  // key -> program
    Circuit evaluate;                                       // q + d -> c wires

    void validate() const;
};

// Worst-case failure probability of the evaluator against f over every
// defined (key, x) pair: max of 1 - <f(key,x)| E(program (x) x) |f(key,x)>.
// Guarded at kappa + d <= 16; basis-state programs ride the statevector
// path, general programs the density path.
double cp_correctness(const CPScheme& scheme, const KeyedMap& f,
                      const SimLimits& limits = default_limits());

// Finite-support distribution over (key, x_B, x_C) triples.
struct CPTriple {
    Bits key;
    Bits x_b;
    Bits x_c;
    double p = 0.0;
};
using CPDistribution = std::vector<CPTriple>;

// Uniform over all 2^kappa * 4^d triples.
CPDistribution uniform_triples(int kappa, int d);

struct CPAttack {
    ChoiChannel splitter;  // q -> q_b + q_c
    ChoiChannel bob;       // d + q_b -> c
    ChoiChannel charlie;   // q_c + d -> c
    int q_b = 0;
    int q_c = 0;

    void validate(const CPScheme& scheme) const;
};

// Probability that both guessers output the map value on their own
// challenge, summed over the triples where f is defined at both (key, x_B)
// and (key, x_C); an empty domain gives 0. Pipeline capped at 12 wires.
double cp_attack_value(const CPScheme& scheme, const KeyedMap& f, const CPDistribution& dist,
                       const CPAttack& attack, const SimLimits& limits = default_limits());

// Program = the key in the computational basis; the evaluator recomputes f
// classically (answering 0^c off the domain). Perfectly correct, and the
// duplicate attack below breaks it outright.
CPScheme classical_copy_scheme(int kappa, int d, int c, const KeyedMap& f);

// Keyless scheme whose program is the conjugate-coded advice at the given
// lambda and whose evaluator is the honest decoder. Its map is
// promise_map(spec, lambda), defined only on instances of the promise.
CPScheme point_scheme(const PromiseSpec& spec, std::uint64_t lambda);

// The promise answers at length 2*lambda as a keyed map with an empty key.
KeyedMap promise_map(const PromiseSpec& spec, std::uint64_t lambda);

// Evaluator that discards its input and answers 0^c; drop-in replacement
// for a scheme's circuit when a maximally wrong evaluator is needed.
Circuit garbage_evaluator(int q, int d, int c);

// Measures the program register, duplicates the outcome to both guessers,
// and lets each recompute f classically. Breaks any scheme whose program
// is a basis state.
CPAttack duplicate_attack(int kappa, int d, int c, const KeyedMap& f);

// Hands the whole program to B, who runs the scheme's own evaluator; C
// answers a uniform string. Its value calibrates the floor every secure
// scheme is measured above.
CPAttack trivial_attack(const CPScheme& scheme, const SimLimits& limits = default_limits());

// --- the derived two-sided language ----------------------------------------

// Membership by length: short strings answer their own parity; long strings
// split as [x (d bits)][y (c bits)][z (rest)] and answer (g(x) . y) xor
// (z . z).
struct LanguageSpec {
    std::function<int(std::uint64_t)> d;
    std::function<int(std::uint64_t)> c;
    std::function<Bits(std::uint64_t, const Bits&)> g;  // length, x -> c bits
};

int language_membership(const LanguageSpec& lang, const Bits& w);

// Exhaustive (count_no, count_yes) over {0,1}^n with g memoized per x.
// Capped at n <= 20.
std::pair<std::uint64_t, std::uint64_t> balance_count(const LanguageSpec& lang, int n);

// Constant-width language over the keyed toy map below.
LanguageSpec prf_language(const Bits& key, int d, int c);

// --- slowdown maps -----------------------------------------------------------

// Given g(n) <= scale * n^degree for n >= onset, the map n -> f(n) with
// f(n) = 0 below the threshold scale^(1/degree) * onset^(2*degree) and
// floor(scale^(-1/degree) * n^(1/(2*degree))) at or above it, evaluated in
// exact integer arithmetic. Non-decreasing, and g(f(n)) < n past the
// threshold.
struct SlowdownMap {
    std::uint64_t degree = 1;
    std::uint64_t scale = 1;
    std::uint64_t onset = 1;

    void validate() const;             // degree in [1,4], scale >= 1
    std::uint64_t threshold() const;   // least n with a nonzero value
    std::uint64_t operator()(std::uint64_t n) const;
};

// All n with f(n) == lambda, by scanning the exact candidate window
// [0, max(threshold, scale^2 * (lambda+1)^(2*degree))).
std::vector<std::uint64_t> slowdown_preimage(const SlowdownMap& f, std::uint64_t lambda);

// --- toy keyed map ------------------------------------------------------------

// Four-round Feistel over splitmix-style round mixing, keyed by hashing the
// key string. Deterministic plumbing for the harness above; it is NOT a
// cryptographic PRF and carries no security claim whatsoever.
struct ToyPrfParams {
    int d = 8;  // input bits, <= 64
    int c = 8;  // output bits, <= 64
};

Bits toy_prf(const Bits& key, const Bits& x, const ToyPrfParams& p);

}  // namespace quclone
