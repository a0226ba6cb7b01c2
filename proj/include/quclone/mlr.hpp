#pragma once

// Stream blocking, block numerals, a doubling martingale, and a rank-based
// block compressor driven by generator circuit families.
//
// The compressor's contract: a generator family assigns each block index a
// circuit; the set S of strings the circuit emits with probability above a
// pressure-dependent threshold is recomputable by anyone holding the family,
// so a block inside its S can be stored as a rank instead of raw bits. The
// record keeps a raw prefix up to the last block that misses its set, then
// fixed-width ranks, then a residual suffix. Serialization is specified in
// FORMAT.md sections 5 and 6.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quclone/circuit.hpp"
#include "quclone/codec.hpp"

namespace quclone {

// Thrown when a record and the generator family it is decoded against
// disagree, or when serialized bytes do not parse back to a record.
struct corruption_error : std::runtime_error {
    explicit corruption_error(const std::string& what) : std::runtime_error(what) {}
};

// --- stream blocking ---------------------------------------------------------

// Splits the leading bits of a stream into `count` blocks, block n taking
// ell(n) bits. Throws std::invalid_argument if the stream runs out or a
// width is negative; extra trailing bits are ignored.
std::vector<Bits> cut(const Bits& stream, const std::function<int(std::uint64_t)>& ell,
                      std::uint64_t count);

// Concatenates blocks back into a stream. Inverse of cut on exact-length
// streams.
Bits uncut(const std::vector<Bits>& blocks);

// --- block numerals (FORMAT.md section 5) ------------------------------------

// num(0) = "", num(n) = binary(n - 1) for n >= 1. Not the same system as
// the length-lexicographic bijection in codec.hpp.
Bits num_encode(std::uint64_t n);
// Inverse. Empty string is 0; otherwise the binary value plus one. Throws
// on non-bits, a redundant leading zero, or 64+ bit inputs.
std::uint64_t num_decode(const Bits& s);

// num_encode(n) left-padded with zeros to at least m bits.
Bits pad_encode(std::uint64_t n, std::size_t m);
// Decodes a padded numeral. All-zeros (including empty) resolves to 0; the
// value 1 is therefore not representable in padded form.
std::uint64_t pad_decode(const Bits& s);

// Every bit of x repeated twice, no terminator.
Bits double_encode(const Bits& x);
// Strict inverse of double_encode: the whole string must be doubled pairs.
Bits undouble(const Bits& s);
// Reads a doubled payload starting at pos, up to and through the first
// "01" terminator pair, advancing pos past it. "10" pairs or running out
// of input throw std::invalid_argument.
Bits double_decode(const Bits& s, std::size_t& pos);

// --- doubling martingale -------------------------------------------------------

// Scans x at the 1-based positions L(0) < L(1) < ... while they fit: a 0
// doubles the stake, a 1 forfeits it (sets it to zero for good). Returns
// the stake after the last in-range position, starting from 1. L must be
// strictly increasing with values >= 1 on the scanned range, else
// std::invalid_argument.
BigInt martingale(const std::function<std::uint64_t(std::uint64_t)>& L, const Bits& x);

// --- block compressor ----------------------------------------------------------

// A deterministic assignment of generator circuits to block indices. The
// circuit for index `lambda` takes no input and emits the block width in
// wires. Builtins over a planted window throw std::out_of_range past it.
struct GeneratorFamily {
    std::function<Circuit(std::uint64_t lambda)> circuit;
};

// Emits blocks[lambda] with probability 1.
GeneratorFamily point_family(std::vector<Bits> blocks);
// Emits blocks[lambda] and its first-bit flip with probability 1/2 each
// (probability 1 when the block is empty).
GeneratorFamily half_mix_family(std::vector<Bits> blocks);
// Emits the uniform distribution over ell(lambda)-bit strings.
GeneratorFamily uniform_family(std::function<int(std::uint64_t)> ell);

// Pressure polynomial: the membership threshold for block lambda is
// (p(lambda) + 1) * 2^-width.
using PolyMap = std::function<std::uint64_t(std::uint64_t)>;

// The pressure used by the incompressibility argument: p(lambda) =
// 2 * ell(lambda + 1)^3, with ell read off the family's circuit widths.
PolyMap proof_pressure(const GeneratorFamily& fam);

// All strings the lambda-th circuit emits with probability at least
// (p(lambda) + 1) * 2^-width, in lexicographic order. Width is capped at
// 16 bits (resource_error beyond).
std::vector<Bits> block_set(const GeneratorFamily& fam, std::uint64_t lambda, const PolyMap& p,
                            const SimLimits& limits = default_limits());

// Compressed form of a run of complete blocks plus a residual tail.
//
//   prefix   raw concatenation of blocks 0 .. lambda_tilde
//   ranks    for lambda_tilde < lambda <= lambda_n, the zero-based rank of
//            block lambda in its set, in plain binary at width
//            |num_encode(set size)|
//   suffix   residual bits after the last complete block, verbatim
//
// lambda_tilde is the largest index whose block misses its set or whose
// pressure is zero (-1 when every block is ranked). set_sizes records the
// per-block set sizes for the ranked range, in order.
struct CompressedBlockRecord {
    Bits prefix;
    std::vector<Bits> ranks;
    Bits suffix;
    std::int64_t lambda_tilde = -1;
    std::int64_t lambda_n = -1;
    std::vector<std::uint64_t> set_sizes;

    bool operator==(const CompressedBlockRecord&) const = default;
};

// Total payload size in bits: prefix + ranks + suffix.
std::uint64_t record_bit_length(const CompressedBlockRecord& rec);

// Compresses complete blocks (block lambda must match the family's width
// at lambda) plus a residual carried verbatim. Widths above 16 bits raise
// resource_error; width mismatches std::invalid_argument.
CompressedBlockRecord block_compress(const std::vector<Bits>& blocks, const Bits& residual,
                                     const GeneratorFamily& fam, const PolyMap& p,
                                     const SimLimits& limits = default_limits());

// Rebuilds the blocks from a record using the same family and pressure.
// The residual stays available as rec.suffix. Any disagreement between the
// record and the recomputed sets raises corruption_error.
std::vector<Bits> block_decompress(const CompressedBlockRecord& rec, const GeneratorFamily& fam,
                                   const PolyMap& p, const SimLimits& limits = default_limits());

// FORMAT.md section 6 byte layout: four bit-length-prefixed sections
// (prefix, packed ranks, suffix, metadata JSON).
std::string serialize_record(const CompressedBlockRecord& rec);
CompressedBlockRecord deserialize_record(const std::string& bytes);

}  // namespace quclone
