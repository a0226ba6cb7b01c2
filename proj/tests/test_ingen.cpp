#include <doctest.h>

#include <cmath>

#include "quclone/ingen.hpp"

using namespace quclone;

namespace {

// generator description indices used to plant adversaries
std::uint64_t index_of(const Circuit& c) { return string_to_nat(encode_circuit(c)); }

Circuit preps(int n) {
    Circuit c;
    c.input_wires = 0;
    for (int i = 0; i < n; ++i) c.then(g_prep());
    return c;
}

}  // namespace

TEST_SUITE_BEGIN("ingen");

TEST_CASE("alpha and beta walk the triangle") {
    const std::vector<std::uint64_t> want_a = {0, 0, 1, 0, 1, 2};
    const std::vector<std::uint64_t> want_b = {0, 1, 1, 2, 2, 2};
    for (std::uint64_t n = 0; n < 6; ++n) {
        const auto [a, b] = alpha_beta(n);
        CHECK(a == want_a[n]);
        CHECK(b == want_b[n]);
    }
    // each m repeats exactly m+1 times, and both stay <= n
    std::uint64_t runs_of[40] = {};
    for (std::uint64_t n = 0; n <= 10000; ++n) {
        const auto [a, b] = alpha_beta(n);
        REQUIRE(a <= n);
        REQUIRE(b <= n);
        if (b < 40) ++runs_of[b];
        REQUIRE(a <= b);  // alpha counts 0..m within each run
    }
    for (std::uint64_t m = 0; m < 20; ++m) CHECK(runs_of[m] == m + 1);

    // generator 0 keeps meeting new budgets along the schedule
    std::set<std::uint64_t> budgets_for_zero;
    for (std::uint64_t n = 0; n <= 66; ++n) {
        const auto [a, b] = alpha_beta(n);
        if (a == 0) budgets_for_zero.insert(b);
    }
    CHECK(budgets_for_zero.size() >= 11);
}

TEST_CASE("compute_S respects arity, thresholds, and ties") {
    SUBCASE("wrong arity gives the empty set") {
        IngenConfig cfg = default_ingen_config([](std::uint64_t) { return 2; });
        cfg.schedule = [](std::uint64_t) {
            return std::make_pair(std::uint64_t{0}, BudgetSchedule::unbounded());
        };
        CHECK(compute_S(0, 0, cfg).empty());
    }
    SUBCASE("a deterministic generator is caught when q <= 1") {
        IngenConfig cfg = default_ingen_config([](std::uint64_t) { return 2; });
        cfg.q = [](std::uint64_t) { return 0.5; };
        const std::uint64_t plant = index_of(preps(2));
        cfg.schedule = [plant](std::uint64_t) {
            return std::make_pair(plant, BudgetSchedule::unbounded());
        };
        const std::vector<Bits> s = compute_S(0, 0, cfg);
        REQUIRE(s.size() == 1);
        CHECK(s[0] == "00");
    }
    SUBCASE("exact ties count as generated and saturate the cardinality bound") {
        // PREP H PREP H emits each of the four strings with probability 1/4
        Circuit unif;
        unif.input_wires = 0;
        unif.then(g_prep()).then(g_h(0)).then(g_prep()).then(g_h(1));
        IngenConfig cfg = default_ingen_config([](std::uint64_t) { return 2; });
        cfg.q = [](std::uint64_t) { return 0.25; };
        const std::uint64_t plant = index_of(expand_macros(unif));
        cfg.schedule = [plant](std::uint64_t) {
            return std::make_pair(plant, BudgetSchedule::unbounded());
        };
        const std::vector<Bits> s = compute_S(0, 7, cfg);
        CHECK(s.size() == 4);  // = 1/q exactly
    }
    SUBCASE("budgets exclude expensive generators") {
        IngenConfig cfg = default_ingen_config([](std::uint64_t) { return 2; });
        cfg.q = [](std::uint64_t) { return 0.5; };
        const std::uint64_t plant = index_of(preps(2));
        cfg.schedule = [plant](std::uint64_t) {
            // r_0(n) = 2 but the generator costs 2 gates: allowed
            return std::make_pair(plant, BudgetSchedule::family(0));
        };
        CHECK(compute_S(0, 0, cfg).size() == 1);
        const std::uint64_t plant3 = index_of(preps(3));
        IngenConfig cfg3 = default_ingen_config([](std::uint64_t) { return 3; });
        cfg3.q = [](std::uint64_t) { return 0.5; };
        cfg3.schedule = [plant3](std::uint64_t) {
            // 3 gates against a budget of 2: excluded
            return std::make_pair(plant3, BudgetSchedule::family(0));
        };
        CHECK(compute_S(0, 0, cfg3).empty());
    }
}

TEST_CASE("diagonalize on the default schedule yields all-zero entries at small horizons") {
    IngenConfig cfg = default_ingen_config(
        [](std::uint64_t n) { return static_cast<int>(std::min<std::uint64_t>(n, 10)); });
    const SequencePrefix p = diagonalize(cfg, 24);
    REQUIRE(p.entries.size() == 25);
    for (std::uint64_t n = 0; n <= 24; ++n) {
        const int l = static_cast<int>(std::min<std::uint64_t>(n, 10));
        REQUIRE(p.entries[n].size() == static_cast<std::size_t>(l));
        CHECK(p.entries[n] == Bits(static_cast<std::size_t>(l), '0'));
        CHECK(p.audits[n].rank == 0);
    }

    // deterministic: identical prefixes and fingerprints on a second run
    const SequencePrefix p2 = diagonalize(cfg, 24);
    CHECK(p.entries == p2.entries);
    CHECK(p.fingerprint == p2.fingerprint);
    CHECK(p.fingerprint != 0);
}

TEST_CASE("a planted deterministic generator moves the diagonal off its output") {
    IngenConfig cfg = default_ingen_config([](std::uint64_t) { return 4; });
    cfg.q = [](std::uint64_t) { return 0.6; };
    const std::uint64_t plant = index_of(preps(4));
    cfg.schedule = [plant](std::uint64_t) {
        return std::make_pair(plant, BudgetSchedule::unbounded());
    };
    const SequencePrefix p = diagonalize(cfg, 8);
    for (const Bits& e : p.entries) CHECK(e == "0001");
    for (const EntryAudit& a : p.audits) {
        CHECK(a.union_size == 1);
        CHECK(a.rank == 1);
    }
}

TEST_CASE("a generator planted at step 3 is only dodged from n = 3 onward") {
    IngenConfig cfg = default_ingen_config([](std::uint64_t) { return 4; });
    cfg.q = [](std::uint64_t) { return 0.6; };
    const std::uint64_t plant = index_of(preps(4));
    cfg.schedule = [plant](std::uint64_t t) {
        if (t == 3) return std::make_pair(plant, BudgetSchedule::unbounded());
        return std::make_pair(std::uint64_t{0}, BudgetSchedule::unbounded());
    };
    const SequencePrefix p = diagonalize(cfg, 8);
    for (std::uint64_t n = 0; n <= 8; ++n)
        CHECK(p.entries[n] == (n < 3 ? "0000" : "0001"));

    const WitnessReport from3 = witness_check(p, 3);
    CHECK(from3.all_pass);
    REQUIRE(from3.entries.size() == 9);
    for (std::uint64_t n = 0; n <= 8; ++n) {
        CHECK(from3.entries[n].arity_ok);
        // the plant emits 0000 with certainty, which the early entries equal
        CHECK(from3.entries[n].generated == (n < 3));
    }

    // step 0 decodes to the empty circuit: wrong arity, nothing to report
    const WitnessReport from0 = witness_check(p, 0);
    CHECK(from0.all_pass);
    for (const WitnessEntry& e : from0.entries) CHECK_FALSE(e.arity_ok);
}

TEST_CASE("witness_check passes for every step against the default prefix") {
    IngenConfig cfg = default_ingen_config(
        [](std::uint64_t n) { return static_cast<int>(std::min<std::uint64_t>(n, 8)); });
    const SequencePrefix p = diagonalize(cfg, 10);
    for (std::uint64_t t = 0; t <= 10; ++t) {
        const WitnessReport r = witness_check(p, t);
        CHECK(r.all_pass);
    }
}

TEST_CASE("a uniform generator never generates when q clears the uniform mass") {
    // uniform over 2 bits, q = 0.6 > 1/4: nothing lands in S, and the
    // witness probability matches 2^-ell exactly
    Circuit unif;
    unif.input_wires = 0;
    unif.then(g_prep()).then(g_h(0)).then(g_prep()).then(g_h(1));
    IngenConfig cfg = default_ingen_config([](std::uint64_t) { return 2; });
    cfg.q = [](std::uint64_t) { return 0.6; };
    const std::uint64_t plant = index_of(expand_macros(unif));
    cfg.schedule = [plant](std::uint64_t) {
        return std::make_pair(plant, BudgetSchedule::unbounded());
    };
    const SequencePrefix p = diagonalize(cfg, 1);
    CHECK(p.entries[0] == "00");
    const WitnessReport r = witness_check(p, 0);
    CHECK(r.all_pass);
    CHECK(r.entries[0].probability == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("config validation rejects broken hypotheses") {
    IngenConfig cfg = default_ingen_config([](std::uint64_t) { return 1; });
    cfg.q = [](std::uint64_t) { return 0.5; };  // q * 2^ell = 1, never > n+1
    CHECK_THROWS_AS(diagonalize(cfg, 0), std::invalid_argument);

    IngenConfig big = default_ingen_config([](std::uint64_t) { return 17; });
    CHECK_THROWS_AS(diagonalize(big, 0), std::invalid_argument);

    IngenConfig empty;
    CHECK_THROWS_AS(validate_config(empty, 0), std::invalid_argument);
}

TEST_CASE("zero_leading zeroes first bits and nothing else") {
    SequencePrefix p;
    p.entries = {Bits(""), "110", "0", "1", "0110"};
    p.audits.resize(5);
    for (std::size_t i = 0; i < 5; ++i) {
        p.audits[i].rank = i < p.entries.size() && !p.entries[i].empty()
                               ? bits_to_index(p.entries[i])
                               : 0;
    }
    const SequencePrefix z = zero_leading(p);
    CHECK(z.entries[0] == "");
    CHECK(z.entries[1] == "010");
    CHECK(z.entries[2] == "0");
    CHECK(z.entries[3] == "0");
    CHECK(z.entries[4] == "0110");
    for (std::size_t i = 0; i < 5; ++i) CHECK(z.entries[i].size() == p.entries[i].size());
    const SequencePrefix zz = zero_leading(z);
    CHECK(zz.entries == z.entries);
    CHECK(z.audits[1].rank == 2);
}

TEST_CASE("clone deficiency of the copier") {
    const Circuit copier1 = transversal_copier(1);
    CHECK(clone_deficiency(copier1, DensityState::basis("1")) == doctest::Approx(0.0));
    const DensityState plus = DensityState::from_pure(wiesner_encode("0", "1"));
    CHECK(clone_deficiency(copier1, plus) ==
          doctest::Approx(0.7071067811865476).epsilon(1e-9));

    // classical basis states clone perfectly, exhaustively up to 5 qubits
    for (int n = 1; n <= 5; ++n) {
        const Circuit copier = transversal_copier(n);
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
            const DensityState rho = DensityState::basis(index_to_bits(x, n));
            REQUIRE(clone_deficiency(copier, rho) < 1e-9);
        }
    }

    CHECK_THROWS_AS(clone_deficiency(transversal_copier(2), DensityState::basis("1")),
                    std::invalid_argument);
}

TEST_CASE("prefix serialization carries entries, audits, and the fingerprint") {
    IngenConfig cfg = default_ingen_config([](std::uint64_t n) {
        return static_cast<int>(std::min<std::uint64_t>(n, 4));
    });
    const SequencePrefix p = diagonalize(cfg, 6);
    const nlohmann::json j = prefix_to_json(p);
    CHECK(j["schema_version"] == 1);
    CHECK(j["fingerprint"] == p.fingerprint);
    CHECK(j["horizon"] == 6);
    CHECK(j["entries"].size() == 7);
    CHECK(j["audits"].size() == 7);
    CHECK(j["config"]["alpha"].size() == 7);
    CHECK(j["audits"][6]["sets"].size() == 7);
    // stable across runs
    CHECK(prefix_to_json(diagonalize(cfg, 6)) == j);
}

TEST_SUITE_END();
