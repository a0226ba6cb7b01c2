#include "quclone/mlr.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <json.hpp>

#include "quclone/gates.hpp"

namespace quclone {

// --- stream blocking ---------------------------------------------------------

std::vector<Bits> cut(const Bits& stream, const std::function<int(std::uint64_t)>& ell,
                      std::uint64_t count) {
    require_bits(stream, "cut");
    if (!ell) throw std::invalid_argument("cut: width map must be set");
    std::vector<Bits> blocks;
    blocks.reserve(count);
    std::size_t off = 0;
    for (std::uint64_t n = 0; n < count; ++n) {
        const int w = ell(n);
        if (w < 0) throw std::invalid_argument("cut: negative block width");
        if (off + static_cast<std::size_t>(w) > stream.size())
            throw std::invalid_argument("cut: stream too short for the requested blocks");
        blocks.push_back(stream.substr(off, static_cast<std::size_t>(w)));
        off += static_cast<std::size_t>(w);
    }
    return blocks;
}

Bits uncut(const std::vector<Bits>& blocks) {
    Bits out;
    for (const Bits& b : blocks) {
        require_bits(b, "uncut");
        out += b;
    }
    return out;
}

// --- block numerals ------------------------------------------------------------

Bits num_encode(std::uint64_t n) {
    if (n == 0) return "";
    const std::uint64_t v = n - 1;
    if (v == 0) return "0";
    Bits out;
    for (int i = 63; i >= 0; --i)
        if ((v >> i) & 1u || !out.empty()) out.push_back(((v >> i) & 1u) ? '1' : '0');
    return out;
}

std::uint64_t num_decode(const Bits& s) {
    require_bits(s, "num_decode");
    if (s.empty()) return 0;
    if (s.size() > 1 && s[0] == '0')
        throw std::invalid_argument("num_decode: redundant leading zero");
    if (s.size() > 63) throw std::invalid_argument("num_decode: numeral beyond 63 bits");
    return bits_to_index(s) + 1;
}

Bits pad_encode(std::uint64_t n, std::size_t m) {
    Bits code = num_encode(n);
    if (code.size() < m) code.insert(0, m - code.size(), '0');
    return code;
}

std::uint64_t pad_decode(const Bits& s) {
    require_bits(s, "pad_decode");
    const std::size_t first = s.find('1');
    if (first == Bits::npos) return 0;  // all zeros: the shared code for 0 (and 1)
    const Bits trimmed = s.substr(first);
    if (trimmed.size() > 63) throw std::invalid_argument("pad_decode: numeral beyond 63 bits");
    return bits_to_index(trimmed) + 1;
}

Bits double_encode(const Bits& x) {
    require_bits(x, "double_encode");
    Bits out;
    out.reserve(2 * x.size());
    for (char c : x) {
        out.push_back(c);
        out.push_back(c);
    }
    return out;
}

Bits undouble(const Bits& s) {
    require_bits(s, "undouble");
    if (s.size() % 2 != 0) throw std::invalid_argument("undouble: odd length");
    Bits out;
    out.reserve(s.size() / 2);
    for (std::size_t i = 0; i < s.size(); i += 2) {
        if (s[i] != s[i + 1]) throw std::invalid_argument("undouble: unpaired bits");
        out.push_back(s[i]);
    }
    return out;
}

Bits double_decode(const Bits& s, std::size_t& pos) {
    Bits out;
    std::size_t i = pos;
    while (true) {
        if (i + 1 >= s.size()) throw std::invalid_argument("double_decode: missing terminator");
        const char a = s[i];
        const char b = s[i + 1];
        if ((a != '0' && a != '1') || (b != '0' && b != '1'))
            throw std::invalid_argument("double_decode: not a bit string");
        i += 2;
        if (a == b) {
            out.push_back(a);
            continue;
        }
        if (a == '0') break;  // the 01 terminator
        throw std::invalid_argument("double_decode: malformed pair 10");
    }
    pos = i;
    return out;
}

// --- doubling martingale ---------------------------------------------------------

BigInt martingale(const std::function<std::uint64_t(std::uint64_t)>& L, const Bits& x) {
    if (!L) throw std::invalid_argument("martingale: index map must be set");
    require_bits(x, "martingale");
    BigInt stake = 1;
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0;; ++i) {
        const std::uint64_t li = L(i);
        if (li < 1) throw std::invalid_argument("martingale: positions are 1-based");
        if (i > 0 && li <= prev)
            throw std::invalid_argument("martingale: index map must be strictly increasing");
        if (li > x.size()) return stake;
        if (x[static_cast<std::size_t>(li - 1)] == '0')
            stake *= 2;
        else
            stake = 0;  // forfeited for good; keep scanning so the bound stays tight
        prev = li;
    }
}

// --- block compressor ------------------------------------------------------------

namespace {

constexpr double kTieGuard = 1e-12;
constexpr int kMaxBlockWires = 16;

Circuit planted_circuit(const Bits& block, bool mix_first) {
    Circuit c;
    for (std::size_t i = 0; i < block.size(); ++i) c.then(g_prep());
    for (std::size_t i = 0; i < block.size(); ++i)
        if (block[i] == '1' && !(mix_first && i == 0)) c.then(g_x(static_cast<int>(i)));
    if (mix_first && !block.empty()) c.then(g_h(0));
    return c;
}

// Width of the family's circuit at lambda, with the caps every compressor
// entry point shares.
int family_width(const GeneratorFamily& fam, std::uint64_t lambda) {
    if (!fam.circuit) throw std::invalid_argument("generator family: circuit map must be set");
    const Circuit c = fam.circuit(lambda);
    if (c.input_wires != 0)
        throw std::invalid_argument("generator family: circuits must take no input");
    const int w = c.output_wires();
    if (w > kMaxBlockWires) throw resource_error("generator family: block width beyond 16 bits");
    return w;
}

}  // namespace

GeneratorFamily point_family(std::vector<Bits> blocks) {
    for (const Bits& b : blocks) require_bits(b, "point_family");
    return {[blocks = std::move(blocks)](std::uint64_t lambda) {
        return planted_circuit(blocks.at(lambda), false);
    }};
}

GeneratorFamily half_mix_family(std::vector<Bits> blocks) {
    for (const Bits& b : blocks) require_bits(b, "half_mix_family");
    return {[blocks = std::move(blocks)](std::uint64_t lambda) {
        return planted_circuit(blocks.at(lambda), true);
    }};
}

GeneratorFamily uniform_family(std::function<int(std::uint64_t)> ell) {
    if (!ell) throw std::invalid_argument("uniform_family: width map must be set");
    return {[ell = std::move(ell)](std::uint64_t lambda) {
        const int w = ell(lambda);
        if (w < 0) throw std::invalid_argument("uniform_family: negative block width");
        Circuit c;
        for (int i = 0; i < w; ++i) c.then(g_prep());
        for (int i = 0; i < w; ++i) c.then(g_h(i));
        return c;
    }};
}

PolyMap proof_pressure(const GeneratorFamily& fam) {
    if (!fam.circuit) throw std::invalid_argument("proof_pressure: circuit map must be set");
    return [fam](std::uint64_t lambda) {
        const std::uint64_t w = static_cast<std::uint64_t>(family_width(fam, lambda + 1));
        return 2 * w * w * w;
    };
}

std::vector<Bits> block_set(const GeneratorFamily& fam, std::uint64_t lambda, const PolyMap& p,
                            const SimLimits& limits) {
    if (!p) throw std::invalid_argument("block_set: pressure map must be set");
    const int w = family_width(fam, lambda);
    const double threshold =
        (static_cast<double>(p(lambda)) + 1.0) * std::ldexp(1.0, -w) - kTieGuard;
    const std::vector<double> dist = output_distribution(fam.circuit(lambda), "", limits);
    std::vector<Bits> out;
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i] >= threshold) out.push_back(index_to_bits(i, w));
    return out;  // index order == lexicographic order
}

std::uint64_t record_bit_length(const CompressedBlockRecord& rec) {
    std::uint64_t total = rec.prefix.size() + rec.suffix.size();
    for (const Bits& r : rec.ranks) total += r.size();
    return total;
}

CompressedBlockRecord block_compress(const std::vector<Bits>& blocks, const Bits& residual,
                                     const GeneratorFamily& fam, const PolyMap& p,
                                     const SimLimits& limits) {
    if (!p) throw std::invalid_argument("block_compress: pressure map must be set");
    require_bits(residual, "block_compress");
    for (const Bits& b : blocks) require_bits(b, "block_compress");

    CompressedBlockRecord rec;
    rec.lambda_n = static_cast<std::int64_t>(blocks.size()) - 1;
    rec.suffix = residual;

    std::vector<std::vector<Bits>> sets(blocks.size());
    std::int64_t tilde = -1;
    for (std::size_t lam = 0; lam < blocks.size(); ++lam) {
        const int w = family_width(fam, lam);
        if (static_cast<std::size_t>(w) != blocks[lam].size())
            throw std::invalid_argument("block_compress: block width disagrees with the family");
        sets[lam] = block_set(fam, lam, p, limits);
        const bool member =
            std::binary_search(sets[lam].begin(), sets[lam].end(), blocks[lam]);
        if (p(lam) == 0 || !member) tilde = static_cast<std::int64_t>(lam);
    }
    rec.lambda_tilde = tilde;

    for (std::int64_t lam = 0; lam <= tilde; ++lam)
        rec.prefix += blocks[static_cast<std::size_t>(lam)];
    for (std::int64_t lam = tilde + 1; lam <= rec.lambda_n; ++lam) {
        const std::vector<Bits>& s = sets[static_cast<std::size_t>(lam)];
        const auto it = std::lower_bound(s.begin(), s.end(), blocks[static_cast<std::size_t>(lam)]);
        const std::uint64_t idx = static_cast<std::uint64_t>(it - s.begin());
        const std::size_t width = num_encode(s.size()).size();
        rec.ranks.push_back(pad_encode(idx + 1, width));  // == binary(idx) at fixed width
        rec.set_sizes.push_back(s.size());
    }
    return rec;
}

std::vector<Bits> block_decompress(const CompressedBlockRecord& rec, const GeneratorFamily& fam,
                                   const PolyMap& p, const SimLimits& limits) {
    if (!p) throw std::invalid_argument("block_decompress: pressure map must be set");
    if (!is_bits(rec.prefix) || !is_bits(rec.suffix))
        throw corruption_error("record fields must be bit strings");
    if (rec.lambda_n < -1 || rec.lambda_tilde < -1 || rec.lambda_tilde > rec.lambda_n)
        throw corruption_error("split index outside the block range");
    const std::size_t ranked = static_cast<std::size_t>(rec.lambda_n - rec.lambda_tilde);
    if (rec.ranks.size() != ranked || rec.set_sizes.size() != ranked)
        throw corruption_error("rank count disagrees with the index range");

    std::vector<Bits> blocks;
    blocks.reserve(static_cast<std::size_t>(rec.lambda_n + 1));
    std::size_t off = 0;
    for (std::int64_t lam = 0; lam <= rec.lambda_tilde; ++lam) {
        const std::size_t w =
            static_cast<std::size_t>(family_width(fam, static_cast<std::uint64_t>(lam)));
        if (off + w > rec.prefix.size())
            throw corruption_error("raw prefix shorter than the family widths");
        blocks.push_back(rec.prefix.substr(off, w));
        off += w;
    }
    if (off != rec.prefix.size())
        throw corruption_error("raw prefix longer than the family widths");

    for (std::size_t i = 0; i < ranked; ++i) {
        const std::uint64_t lam = static_cast<std::uint64_t>(rec.lambda_tilde + 1) + i;
        if (p(lam) == 0) throw corruption_error("ranked block at zero pressure");
        const std::vector<Bits> s = block_set(fam, lam, p, limits);
        if (s.size() != rec.set_sizes[i])
            throw corruption_error("recomputed set size disagrees with the record");
        const Bits& code = rec.ranks[i];
        if (!is_bits(code) || code.size() != num_encode(s.size()).size())
            throw corruption_error("rank width disagrees with the set size");
        const std::uint64_t idx = bits_to_index(code);
        if (idx >= s.size()) throw corruption_error("rank beyond the set");
        blocks.push_back(s[idx]);
    }
    return blocks;
}

// --- serialization (FORMAT.md section 6) ----------------------------------------

namespace {

void append_u64_be(std::string& out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i)
        out.push_back(static_cast<char>(static_cast<unsigned char>((v >> (8 * i)) & 0xffu)));
}

void append_section(std::string& out, const Bits& bits) {
    append_u64_be(out, bits.size());
    const std::size_t nbytes = (bits.size() + 7) / 8;
    std::string packed(nbytes, '\0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] == '1')
            packed[i / 8] = static_cast<char>(static_cast<unsigned char>(packed[i / 8]) |
                                              (0x80u >> (i % 8)));
    out += packed;
}

std::uint64_t read_u64_be(const std::string& bytes, std::size_t& pos) {
    if (pos + 8 > bytes.size()) throw corruption_error("truncated length field");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v = (v << 8) | static_cast<unsigned char>(bytes[pos + static_cast<std::size_t>(i)]);
    pos += 8;
    return v;
}

Bits read_section(const std::string& bytes, std::size_t& pos) {
    const std::uint64_t nbits = read_u64_be(bytes, pos);
    const std::uint64_t nbytes = (nbits + 7) / 8;
    if (pos + nbytes > bytes.size()) throw corruption_error("truncated section");
    Bits bits(static_cast<std::size_t>(nbits), '0');
    for (std::uint64_t i = 0; i < nbits; ++i) {
        const unsigned char byte = static_cast<unsigned char>(bytes[pos + i / 8]);
        if (byte & (0x80u >> (i % 8))) bits[static_cast<std::size_t>(i)] = '1';
    }
    // zero padding in the final byte is part of the format
    for (std::uint64_t i = nbits; i < nbytes * 8; ++i) {
        const unsigned char byte = static_cast<unsigned char>(bytes[pos + i / 8]);
        if (byte & (0x80u >> (i % 8))) throw corruption_error("nonzero section padding");
    }
    pos += nbytes;
    return bits;
}

}  // namespace

std::string serialize_record(const CompressedBlockRecord& rec) {
    require_bits(rec.prefix, "serialize_record");
    require_bits(rec.suffix, "serialize_record");
    Bits rank_bits;
    for (const Bits& r : rec.ranks) {
        require_bits(r, "serialize_record");
        rank_bits += r;
    }
    nlohmann::json meta;
    meta["split"] = rec.lambda_tilde;
    meta["last"] = rec.lambda_n;
    meta["sizes"] = rec.set_sizes;
    const std::string meta_bytes = meta.dump();

    std::string out;
    append_section(out, rec.prefix);
    append_section(out, rank_bits);
    append_section(out, rec.suffix);
    append_u64_be(out, 8 * meta_bytes.size());
    out += meta_bytes;
    return out;
}

CompressedBlockRecord deserialize_record(const std::string& bytes) {
    std::size_t pos = 0;
    CompressedBlockRecord rec;
    rec.prefix = read_section(bytes, pos);
    const Bits rank_bits = read_section(bytes, pos);
    rec.suffix = read_section(bytes, pos);

    const std::uint64_t meta_bits = read_u64_be(bytes, pos);
    if (meta_bits % 8 != 0) throw corruption_error("metadata is not byte aligned");
    const std::uint64_t meta_len = meta_bits / 8;
    if (pos + meta_len > bytes.size()) throw corruption_error("truncated section");
    const std::string meta_bytes = bytes.substr(pos, static_cast<std::size_t>(meta_len));
    pos += meta_len;
    if (pos != bytes.size()) throw corruption_error("trailing bytes after the record");

    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(meta_bytes);
    } catch (const nlohmann::json::exception&) {
        throw corruption_error("metadata is not valid JSON");
    }
    if (!meta.is_object() || !meta.contains("split") || !meta.contains("last") ||
        !meta.contains("sizes") || !meta["split"].is_number_integer() ||
        !meta["last"].is_number_integer() || !meta["sizes"].is_array())
        throw corruption_error("metadata is missing a required field");
    rec.lambda_tilde = meta["split"].get<std::int64_t>();
    rec.lambda_n = meta["last"].get<std::int64_t>();
    for (const auto& entry : meta["sizes"]) {
        if (!entry.is_number_unsigned()) throw corruption_error("set sizes must be naturals");
        rec.set_sizes.push_back(entry.get<std::uint64_t>());
    }

    std::size_t off = 0;
    for (std::uint64_t size : rec.set_sizes) {
        const std::size_t width = num_encode(size).size();
        if (off + width > rank_bits.size())
            throw corruption_error("rank section length disagrees with the set sizes");
        rec.ranks.push_back(rank_bits.substr(off, width));
        off += width;
    }
    if (off != rank_bits.size())
        throw corruption_error("rank section length disagrees with the set sizes");
    return rec;
}

}  // namespace quclone
