#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "quclone/mlr.hpp"

using namespace quclone;

namespace {

Bits random_bits(std::mt19937_64& rng, std::size_t n) {
    Bits out(n, '0');
    for (auto& c : out) c = (rng() & 1u) ? '1' : '0';
    return out;
}

Bits flip_first(Bits b) {
    if (!b.empty()) b[0] = (b[0] == '0') ? '1' : '0';
    return b;
}

// Reference for the martingale: scan the sorted positions that fit, forfeit
// on any 1, otherwise double per position.
BigInt martingale_reference(const std::vector<std::uint64_t>& positions, const Bits& x) {
    BigInt v = 1;
    for (std::uint64_t p : positions) {
        if (p > x.size()) break;
        if (x[static_cast<std::size_t>(p - 1)] == '1') return 0;
        v *= 2;
    }
    return v;
}

// Extends a finite sorted position list into a total strictly increasing map.
std::function<std::uint64_t(std::uint64_t)> position_map(std::vector<std::uint64_t> positions) {
    return [positions = std::move(positions)](std::uint64_t i) {
        if (i < positions.size()) return positions[i];
        const std::uint64_t base = positions.empty() ? 0 : positions.back();
        return base + 1 + (i - positions.size());
    };
}

}  // namespace

TEST_SUITE("mlr") {

TEST_CASE("cut splits a stream by the width map") {
    const auto ones = [](std::uint64_t) { return 1; };
    CHECK(cut("0110", ones, 4) == std::vector<Bits>{"0", "1", "1", "0"});

    const auto ident = [](std::uint64_t n) { return static_cast<int>(n); };
    CHECK(cut("011", ident, 3) == std::vector<Bits>{"", "0", "11"});
    CHECK(cut("0111010", ident, 3) == std::vector<Bits>{"", "0", "11"});  // tail ignored

    CHECK_THROWS_AS(cut("01", ones, 3), std::invalid_argument);
    CHECK_THROWS_AS(cut("01", [](std::uint64_t) { return -1; }, 1), std::invalid_argument);
    CHECK_THROWS_AS(cut("0a1", ones, 2), std::invalid_argument);
    CHECK_THROWS_AS(uncut({"01", "x"}), std::invalid_argument);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> widths(1 + rng() % 8);
        std::size_t total = 0;
        for (auto& w : widths) {
            w = static_cast<int>(rng() % 6);
            total += static_cast<std::size_t>(w);
        }
        const Bits stream = random_bits(rng, total + rng() % 4);
        const auto ell = [&widths](std::uint64_t n) { return widths[n]; };
        const auto blocks = cut(stream, ell, widths.size());
        CHECK(uncut(blocks) == stream.substr(0, total));
    }
}

TEST_CASE("block numerals match the fixed format") {
    CHECK(num_encode(0) == "");
    CHECK(num_encode(1) == "0");
    CHECK(num_encode(2) == "1");
    CHECK(num_encode(3) == "10");
    CHECK(num_encode(5) == "100");
    for (std::uint64_t n = 0; n <= 500; ++n) CHECK(num_decode(num_encode(n)) == n);

    CHECK_THROWS_AS(num_decode("01"), std::invalid_argument);  // redundant leading zero
    CHECK_THROWS_AS(num_decode("2"), std::invalid_argument);
    CHECK_THROWS_AS(num_decode(Bits(64, '1')), std::invalid_argument);

    CHECK(pad_encode(5, 6) == "000100");
    CHECK(pad_encode(0, 4) == "0000");
    CHECK(pad_encode(1, 4) == "0000");  // 0 and 1 share the all-zeros code
    CHECK(pad_decode("0000") == 0);
    CHECK(pad_decode("") == 0);
    CHECK(pad_decode("000100") == 5);
    CHECK(pad_encode(200, 3) == num_encode(200));  // never truncates
    CHECK(pad_decode(pad_encode(200, 3)) == 200);
    for (std::uint64_t n = 0; n <= 64; ++n) {
        if (n == 1) continue;  // the documented collision with 0
        CHECK(pad_decode(pad_encode(n, 6)) == n);
    }
}

TEST_CASE("doubling codec") {
    CHECK(double_encode("101") == "110011");
    CHECK(double_encode("") == "");
    CHECK(undouble("110011") == "101");
    CHECK_THROWS_AS(undouble("110"), std::invalid_argument);
    CHECK_THROWS_AS(undouble("10"), std::invalid_argument);

    std::size_t pos = 0;
    CHECK(double_decode("11001101padding-never-read", pos) == "101");
    CHECK(pos == 8);
    pos = 0;
    CHECK(double_decode("01", pos) == "");
    CHECK(pos == 2);
    pos = 0;
    CHECK_THROWS_AS(double_decode("1100", pos), std::invalid_argument);  // no terminator
    pos = 0;
    CHECK_THROWS_AS(double_decode("1011", pos), std::invalid_argument);  // 10 pair

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const Bits payload = random_bits(rng, rng() % 32);
        const Bits wire = double_encode(payload) + "01";
        pos = 0;
        CHECK(double_decode(wire, pos) == payload);
        CHECK(pos == wire.size());
    }
}

TEST_CASE("martingale doubles on zeros and forfeits on ones") {
    const auto odd = [](std::uint64_t i) { return 2 * i + 1; };
    CHECK(martingale(odd, "000000") == 8);
    // bits at even positions are never scanned
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
        Bits x = "000000";
        for (int b = 0; b < 3; ++b)
            if ((mask >> b) & 1u) x[static_cast<std::size_t>(2 * b + 1)] = '1';
        CHECK(martingale(odd, x) == 8);
    }
    CHECK(martingale(odd, "100000") == 0);
    CHECK(martingale(odd, "001000") == 0);
    CHECK(martingale(odd, "") == 1);
    CHECK(martingale(odd, "0") == 2);

    const auto all = [](std::uint64_t i) { return i + 1; };
    const auto powers = [](std::uint64_t i) { return std::uint64_t{1} << i; };
    for (int len = 0; len <= 12; ++len) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
            const Bits x = index_to_bits(v, len);
            for (const auto& L : {std::function<std::uint64_t(std::uint64_t)>(odd),
                                  std::function<std::uint64_t(std::uint64_t)>(all),
                                  std::function<std::uint64_t(std::uint64_t)>(powers)}) {
                std::vector<std::uint64_t> positions;
                for (std::uint64_t i = 0; L(i) <= static_cast<std::uint64_t>(len); ++i)
                    positions.push_back(L(i));
                REQUIRE(martingale(L, x) == martingale_reference(positions, x));
            }
        }
    }

    // the stake is an average of the stakes after either next bit
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint64_t> positions;
        std::uint64_t p = 0;
        for (int k = 0; k < static_cast<int>(1 + rng() % 5); ++k)
            positions.push_back(p += 1 + rng() % 3);
        const auto L = position_map(positions);
        const Bits x = random_bits(rng, rng() % 10);
        CHECK(2 * martingale(L, x) == martingale(L, x + "0") + martingale(L, x + "1"));
    }

    CHECK_THROWS_AS(martingale([](std::uint64_t) { return std::uint64_t{0}; }, "01"),
                    std::invalid_argument);
    CHECK_THROWS_AS(martingale([](std::uint64_t i) { return 5 - i; }, "000000"),
                    std::invalid_argument);
    // monotonicity is enforced even after the stake is forfeited
    CHECK_THROWS_AS(martingale([](std::uint64_t) { return std::uint64_t{1}; }, "11"),
                    std::invalid_argument);
    CHECK(martingale([](std::uint64_t i) { return i + 1; }, "11") == 0);
    CHECK_THROWS_AS(martingale(odd, "0x"), std::invalid_argument);
}

TEST_CASE("generator families expose their circuits") {
    const auto pf = point_family({"101"});
    const auto d0 = output_distribution(pf.circuit(0), "");
    REQUIRE(d0.size() == 8);
    CHECK(d0[bits_to_index("101")] == doctest::Approx(1.0));

    const auto hf = half_mix_family({"101"});
    const auto d1 = output_distribution(hf.circuit(0), "");
    CHECK(d1[bits_to_index("101")] == doctest::Approx(0.5));
    CHECK(d1[bits_to_index("001")] == doctest::Approx(0.5));

    const auto uf = uniform_family([](std::uint64_t) { return 2; });
    const auto d2 = output_distribution(uf.circuit(0), "");
    for (double q : d2) CHECK(q == doctest::Approx(0.25));

    CHECK_THROWS_AS(pf.circuit(5), std::out_of_range);
    CHECK_THROWS_AS(hf.circuit(1), std::out_of_range);
    CHECK_THROWS_AS(uniform_family(nullptr), std::invalid_argument);

    const PolyMap one = [](std::uint64_t) { return std::uint64_t{1}; };
    const auto wide = uniform_family([](std::uint64_t) { return 17; });
    CHECK_THROWS_AS(block_set(wide, 0, one), resource_error);
    const GeneratorFamily takes_input{[](std::uint64_t) {
        Circuit c;
        c.input_wires = 1;
        return c;
    }};
    CHECK_THROWS_AS(block_set(takes_input, 0, one), std::invalid_argument);
}

TEST_CASE("block sets collect the high-probability outcomes") {
    const auto uf = uniform_family([](std::uint64_t) { return 3; });
    const PolyMap zero = [](std::uint64_t) { return std::uint64_t{0}; };
    const PolyMap one = [](std::uint64_t) { return std::uint64_t{1}; };

    const auto all = block_set(uf, 0, zero);
    REQUIRE(all.size() == 8);
    for (std::uint64_t i = 0; i < 8; ++i) CHECK(all[i] == index_to_bits(i, 3));
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(block_set(uf, 0, one).empty());  // 2/8 > 1/8

    const auto pf = point_family({"110"});
    CHECK(block_set(pf, 0, zero) == std::vector<Bits>{"110"});
    CHECK(block_set(pf, 0, [](std::uint64_t) { return std::uint64_t{7}; }) ==
          std::vector<Bits>{"110"});  // threshold exactly 1, held as a tie
    CHECK(block_set(pf, 0, [](std::uint64_t) { return std::uint64_t{8}; }).empty());

    const auto hf = half_mix_family({"10"});
    const auto halves = block_set(hf, 0, one);  // threshold 2/4, tied
    CHECK(halves == std::vector<Bits>{"00", "10"});
    CHECK(block_set(hf, 0, [](std::uint64_t) { return std::uint64_t{2}; }).empty());
}

TEST_CASE("compressor splits at the last incompressible block") {
    const PolyMap one = [](std::uint64_t) { return std::uint64_t{1}; };
    const std::vector<Bits> planted = {"", "1", "10", "011", "1100", "00101", "110011"};
    const auto fam = half_mix_family(planted);

    // widths 0 and 1 cannot clear the threshold, everything after is ranked
    const auto rec = block_compress(planted, "101", fam, one);
    CHECK(rec.lambda_tilde == 1);
    CHECK(rec.lambda_n == 6);
    CHECK(rec.prefix == "1");
    CHECK(rec.suffix == "101");
    REQUIRE(rec.ranks.size() == 5);
    for (const Bits& r : rec.ranks) CHECK(r.size() == 1);
    for (std::uint64_t s : rec.set_sizes) CHECK(s == 2);
    CHECK(record_bit_length(rec) == 9);  // 21 block bits stored in 6
    CHECK(block_decompress(rec, fam, one) == planted);

    // a point family under mild pressure ranks every block
    const std::vector<Bits> pts = {"101", "000", "111", "010"};
    const auto pf = point_family(pts);
    const auto prec = block_compress(pts, "", pf, one);
    CHECK(prec.lambda_tilde == -1);
    CHECK(prec.prefix.empty());
    CHECK(record_bit_length(prec) == 4);
    CHECK(block_decompress(prec, pf, one) == pts);

    // uniform blocks never clear a positive threshold: raw record
    const auto uf = uniform_family([](std::uint64_t l) { return static_cast<int>(l + 1); });
    const std::vector<Bits> ub = {"1", "01", "110"};
    const auto urec = block_compress(ub, "0", uf, one);
    CHECK(urec.lambda_tilde == urec.lambda_n);
    CHECK(urec.ranks.empty());
    CHECK(urec.prefix == uncut(ub));
    CHECK(block_decompress(urec, uf, one) == ub);

    // zero pressure forces raw storage even when the sets are nonempty
    const PolyMap zero = [](std::uint64_t) { return std::uint64_t{0}; };
    const auto zrec = block_compress(pts, "", pf, zero);
    CHECK(zrec.lambda_tilde == zrec.lambda_n);
    CHECK(zrec.prefix == uncut(pts));
    CHECK(block_decompress(zrec, pf, zero) == pts);

    // no complete blocks at all
    const auto erec = block_compress({}, "11", pf, one);
    CHECK(erec.lambda_n == -1);
    CHECK(erec.lambda_tilde == -1);
    CHECK(erec.prefix.empty());
    CHECK(erec.suffix == "11");
    CHECK(block_decompress(erec, pf, one).empty());

    CHECK_THROWS_AS(block_compress({"10"}, "", pf, one), std::invalid_argument);
    CHECK_THROWS_AS(block_compress({"101"}, "x", pf, one), std::invalid_argument);
    CHECK_THROWS_AS(block_compress({"101"}, "", pf, nullptr), std::invalid_argument);
    const auto wide = uniform_family([](std::uint64_t) { return 17; });
    CHECK_THROWS_AS(block_compress({Bits(17, '0')}, "", wide, one), resource_error);
}

TEST_CASE("proof pressure keeps ranks short") {
    std::mt19937_64 rng(7);

    // width 16 throughout: p = 2 * 16^3 clears at probability 1/2
    std::vector<Bits> planted16;
    for (int i = 0; i < 4; ++i) planted16.push_back(random_bits(rng, 16));
    const auto hf = half_mix_family(planted16);
    const auto hp = proof_pressure(hf);
    CHECK(hp(0) == 8192);
    const std::vector<Bits> blocks16(planted16.begin(), planted16.begin() + 3);
    const auto hrec = block_compress(blocks16, "", hf, hp);
    CHECK(hrec.lambda_tilde == -1);
    REQUIRE(hrec.ranks.size() == 3);
    const double bound16 = 16.0 - 3.0 * std::log2(16.0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(static_cast<double>(hrec.ranks[i].size()) <= bound16);
        CHECK(hrec.set_sizes[i] <= (std::uint64_t{1} << 16) / hp(static_cast<std::uint64_t>(i)));
    }
    CHECK(block_decompress(hrec, hf, hp) == blocks16);

    // width 13: p = 2 * 13^3 = 4394 still fits under 2^13 for a point mass
    std::vector<Bits> planted13;
    for (int i = 0; i < 4; ++i) planted13.push_back(random_bits(rng, 13));
    const auto pf = point_family(planted13);
    const auto pp = proof_pressure(pf);
    CHECK(pp(0) == 4394);
    const std::vector<Bits> blocks13(planted13.begin(), planted13.begin() + 3);
    const auto prec = block_compress(blocks13, "1", pf, pp);
    CHECK(prec.lambda_tilde == -1);
    const double bound13 = 13.0 - 3.0 * std::log2(13.0);
    for (const Bits& r : prec.ranks) CHECK(static_cast<double>(r.size()) <= bound13);
    CHECK(record_bit_length(prec) == 3 + 1);  // three unit ranks plus the residual
    CHECK(block_decompress(prec, pf, pp) == blocks13);
}

TEST_CASE("fifty round trips across families and pressures") {
    for (int j = 0; j < 50; ++j) {
        std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(j));
        const std::size_t window = 3 + static_cast<std::size_t>(j) % 5;
        const auto ell = [j](std::uint64_t lam) {
            return static_cast<int>(1 + (static_cast<std::uint64_t>(j) + lam) % 5);
        };

        std::vector<Bits> planted;
        for (std::size_t lam = 0; lam < window; ++lam)
            planted.push_back(random_bits(rng, static_cast<std::size_t>(ell(lam))));

        const int kind = j % 4;
        GeneratorFamily fam;
        if (kind == 0) {
            fam = point_family(planted);
        } else if (kind == 1) {
            fam = half_mix_family(planted);
        } else if (kind == 2) {
            fam = uniform_family(ell);
        } else {
            const auto pf = point_family(planted);
            const auto uf = uniform_family(ell);
            fam = GeneratorFamily{[pf, uf](std::uint64_t lam) {
                return (lam % 2 == 0) ? pf.circuit(lam) : uf.circuit(lam);
            }};
        }
        const PolyMap p = [j](std::uint64_t lam) {
            return (lam + static_cast<std::uint64_t>(j)) % 3;
        };

        std::vector<Bits> blocks;
        for (std::size_t lam = 0; lam < window; ++lam) {
            const bool from_plant = kind == 0 || (kind == 3 && lam % 2 == 0);
            if (from_plant)
                blocks.push_back(planted[lam]);
            else if (kind == 1)
                blocks.push_back((rng() & 1u) ? planted[lam] : flip_first(planted[lam]));
            else
                blocks.push_back(random_bits(rng, static_cast<std::size_t>(ell(lam))));
        }
        const Bits residual = random_bits(rng, rng() % 6);

        const auto rec = block_compress(blocks, residual, fam, p);
        CHECK(block_decompress(rec, fam, p) == blocks);
        CHECK(rec.suffix == residual);

        std::uint64_t raw_prefix = 0;
        for (std::int64_t lam = 0; lam <= rec.lambda_tilde; ++lam)
            raw_prefix += static_cast<std::uint64_t>(ell(static_cast<std::uint64_t>(lam)));
        CHECK(rec.prefix.size() == raw_prefix);

        std::uint64_t total_raw = residual.size();
        for (std::size_t lam = 0; lam < window; ++lam)
            total_raw += static_cast<std::uint64_t>(ell(lam));
        std::uint64_t saved = 0;
        for (std::size_t i = 0; i < rec.ranks.size(); ++i) {
            const std::uint64_t lam = static_cast<std::uint64_t>(rec.lambda_tilde + 1) + i;
            saved += static_cast<std::uint64_t>(ell(lam)) - rec.ranks[i].size();
        }
        CHECK(record_bit_length(rec) == total_raw - saved);

        const std::string bytes = serialize_record(rec);
        CHECK(serialize_record(rec) == bytes);
        CHECK(deserialize_record(bytes) == rec);
    }
}

TEST_CASE("serialized bytes follow the section layout") {
    const PolyMap one = [](std::uint64_t) { return std::uint64_t{1}; };
    const std::vector<Bits> planted = {"", "1", "10", "011", "1100", "00101", "110011"};
    const auto fam = half_mix_family(planted);
    const auto rec = block_compress(planted, "101", fam, one);
    const std::string bytes = serialize_record(rec);

    // prefix section: bit count 1 then the bit 1 packed high
    REQUIRE(bytes.size() > 27);
    for (int i = 0; i < 7; ++i) CHECK(bytes[static_cast<std::size_t>(i)] == '\0');
    CHECK(bytes[7] == '\x01');
    CHECK(static_cast<unsigned char>(bytes[8]) == 0x80u);
    // rank section: five bits 10101 packed as 0xa8
    CHECK(bytes[16] == '\x05');
    CHECK(static_cast<unsigned char>(bytes[17]) == 0xa8u);
    // suffix section: three bits 101 packed as 0xa0
    CHECK(bytes[25] == '\x03');
    CHECK(static_cast<unsigned char>(bytes[26]) == 0xa0u);
    // metadata: byte-aligned JSON carrying the split, the last index, the sizes
    const std::string meta = bytes.substr(35);
    CHECK(bytes[34] == static_cast<char>(8 * meta.size()));
    const auto j = nlohmann::json::parse(meta);
    CHECK(j.at("split") == 1);
    CHECK(j.at("last") == 6);
    CHECK(j.at("sizes") == std::vector<std::uint64_t>(5, 2));

    CHECK(deserialize_record(bytes) == rec);

    CHECK_THROWS_AS(deserialize_record(bytes.substr(0, bytes.size() - 1)), corruption_error);
    CHECK_THROWS_AS(deserialize_record(bytes + '\0'), corruption_error);
    CHECK_THROWS_AS(deserialize_record(""), corruption_error);
    std::string padded = bytes;
    padded[8] = '\x81';  // nonzero bit beyond the section's declared length
    CHECK_THROWS_AS(deserialize_record(padded), corruption_error);
    std::string garbled = bytes;
    garbled[garbled.size() - 1] = 'X';
    CHECK_THROWS_AS(deserialize_record(garbled), corruption_error);
}

TEST_CASE("decompression rejects records that disagree with the family") {
    const PolyMap one = [](std::uint64_t) { return std::uint64_t{1}; };
    const std::vector<Bits> planted = {"", "1", "10", "011", "1100", "00101", "110011"};
    const auto hf = half_mix_family(planted);
    const auto rec = block_compress(planted, "", hf, one);

    // a different family over the same widths recomputes different sets
    const auto pf = point_family(planted);
    CHECK_THROWS_AS(block_decompress(rec, pf, one), corruption_error);
    // zero pressure cannot have produced ranks
    const PolyMap zero = [](std::uint64_t) { return std::uint64_t{0}; };
    CHECK_THROWS_AS(block_decompress(rec, hf, zero), corruption_error);

    auto tampered = rec;
    tampered.set_sizes[0] = 3;
    CHECK_THROWS_AS(block_decompress(tampered, hf, one), corruption_error);

    tampered = rec;
    tampered.ranks[0] = "10";  // wrong width for a two-element set
    CHECK_THROWS_AS(block_decompress(tampered, hf, one), corruption_error);

    tampered = rec;
    tampered.ranks.pop_back();
    tampered.set_sizes.pop_back();
    CHECK_THROWS_AS(block_decompress(tampered, hf, one), corruption_error);

    tampered = rec;
    tampered.prefix += "0";
    CHECK_THROWS_AS(block_decompress(tampered, hf, one), corruption_error);
    tampered.prefix = "";
    CHECK_THROWS_AS(block_decompress(tampered, hf, one), corruption_error);

    tampered = rec;
    tampered.lambda_tilde = 99;
    CHECK_THROWS_AS(block_decompress(tampered, hf, one), corruption_error);

    // rank beyond the set: a singleton set only admits index 0
    const auto prec = block_compress({"101"}, "", point_family({"101"}), one);
    auto wild = prec;
    wild.ranks[0] = "1";
    CHECK_THROWS_AS(block_decompress(wild, point_family({"101"}), one), corruption_error);
}

}  // TEST_SUITE
