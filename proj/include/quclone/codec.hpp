#pragma once

// Bit-level circuit descriptions and run budgets.
//
// Two separate jobs live here:
//   1. a total, surjective decoder from bit strings to circuits (with a
//      canonical empty-circuit fallback for malformed strings), plus the
//      matching injective encoder on well-formed primitive circuits, and
//   2. the budget family r_k(n) = 2^((n+2)^k) used to cut off expensive
//      generators during enumeration.
//
// The bit format is specified exactly in FORMAT.md at the repo root.

#include <cstdint>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "quclone/circuit.hpp"

namespace quclone {

using BigInt = boost::multiprecision::cpp_int;

// Order-preserving bijection between naturals and bit strings in
// length-then-lexicographic order: 0 <-> "", 1 <-> "0", 2 <-> "1",
// 3 <-> "00", ...  |nat_to_string(n)| = floor(log2(n+1)).
Bits nat_to_string(std::uint64_t n);
// Inverse of nat_to_string. Throws std::invalid_argument for strings of
// 64 bits or more (the value would not fit) or non-bit characters.
std::uint64_t string_to_nat(const Bits& s);

// Self-delimiting naturals: every bit of nat_to_string(n) is doubled and
// the pair "01" terminates. While reading, "10" or running out of input
// is malformed.
void selfdelim_append(Bits& out, std::uint64_t n);
// Reads one self-delimiting natural starting at pos, advancing pos past
// the terminator. Returns nothing if malformed (pos then points at the
// offending spot, unspecified further).
std::optional<std::uint64_t> selfdelim_read(const Bits& s, std::size_t& pos);

// Largest wire index / wire count representable by the description
// format. Encoding rejects circuits beyond it; decoding treats larger
// headers as malformed.
inline constexpr std::uint64_t kMaxFormatIndex = 1u << 20;

// Canonical description of a primitive circuit. Throws
// std::invalid_argument if the circuit fails validation, contains macro
// gates (expand_macros first), contains an empty layer, or exceeds
// kMaxFormatIndex wires.
Bits encode_circuit(const Circuit& c);

// Total decoder: every bit string yields a well-formed circuit. A
// malformed header gives the canonical empty (0,0)-circuit; a malformed
// or invalid record keeps everything decoded before it.
Circuit decode_circuit(const Bits& s);

// A generator program is just a description together with its decoding.
struct GeneratorProgram {
    Bits description;
    Circuit decoded;
};

GeneratorProgram make_generator(const Bits& description);

// Budget schedule r_k(n) = 2^((n+2)^k), or unbounded. Families are
// monotone in k and unbounded dominates them all.
struct BudgetSchedule {
    std::optional<std::uint32_t> k;  // disengaged = unbounded

    static BudgetSchedule unbounded() { return BudgetSchedule{std::nullopt}; }
    static BudgetSchedule family(std::uint32_t k) { return BudgetSchedule{k}; }

    bool is_unbounded() const { return !k.has_value(); }

    // Exact r_k(n). Throws resource_error when the value would exceed
    // the configured bit cap, and std::logic_error when unbounded.
    BigInt eval(std::uint64_t n) const;

    // cost <= r_k(n), computed without materializing the big integer
    // whenever (n+2)^k >= 64 (any 64-bit cost fits under 2^64).
    bool allows(std::uint64_t n, std::uint64_t cost) const;
};

// Bit cap for materializing budgets (eval only; allows() never needs it).
inline constexpr std::uint64_t kMaxBudgetBits = 1ull << 26;

}  // namespace quclone
