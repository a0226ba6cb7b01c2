#pragma once
// Shared vocabulary for the whole library: bit strings, error types,
// numeric tolerances, and resource caps.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace quclone {

// Bit strings are std::strings over {'0','1'}.  Lexicographic order is then
// plain string comparison, and the empty string is the length-0 word.
using Bits = std::string;

// Numeric tolerances used across the library.
inline constexpr double EPS_STATE = 1e-9;    // state normalization / hermiticity
inline constexpr double EPS_CHANNEL = 1e-8;  // Kraus completeness / Choi checks

// Thrown when an operation would exceed a configured resource cap
// (wire count, memory, oversized budget exponent).
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Simulation resource caps.  Density-matrix evolution is quadratic in the
// Hilbert-space dimension, so it gets the tighter wire cap.
struct SimLimits {
    int max_density_wires = 12;
    int max_statevector_wires = 20;
    std::size_t max_megabytes = 1024;  // overridable via QUCLONE_CAP_MB
};

// Reads QUCLONE_CAP_MB from the environment (if set) into a SimLimits value.
SimLimits default_limits();

// --- small bit-string helpers -------------------------------------------------

inline bool is_bits(const Bits& s) {
    for (char c : s)
        if (c != '0' && c != '1') return false;
    return true;
}

inline void require_bits(const Bits& s, const char* what) {
    if (!is_bits(s)) throw std::invalid_argument(std::string(what) + ": not a bit string");
}

// Index of a length-n bit string in [0, 2^n), first character = most significant.
inline std::uint64_t bits_to_index(const Bits& s) {
    std::uint64_t v = 0;
    for (char c : s) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    return v;
}

inline Bits index_to_bits(std::uint64_t v, int n) {
    Bits s(static_cast<std::size_t>(n), '0');
    for (int i = n - 1; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = (v & 1u) ? '1' : '0';
        v >>= 1;
    }
    return s;
}

// Inner product mod 2 of two equal-length bit strings.
inline int dot2(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot2: length mismatch");
    int acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc ^= (a[i] == '1' && b[i] == '1');
    return acc;
}

// FNV-1a over a string; used for config fingerprints in serialized reports.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace quclone
