#include <doctest.h>

#include <cmath>
#include <random>

#include "quclone/simul_gl.hpp"

using namespace quclone;

TEST_SUITE("gl") {

TEST_CASE("exact extraction recovers every string") {
    for (int ell = 1; ell <= 3; ++ell) {
        const Circuit t = gl_transform(parity_guesser(ell));
        CHECK(t.input_wires == ell);
        CHECK(t.output_wires() == ell);
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << ell); ++x) {
            const Bits xs = index_to_bits(x, ell);
            CHECK(outcome_probability(t, xs, xs) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("dilations invert cleanly") {
    std::mt19937_64 rng(8);
    for (const InnerProductGuesser& g :
         {parity_guesser(2), noisy_parity_guesser(2), skewed_noisy_parity_guesser(2)}) {
        Circuit round_trip;
        round_trip.input_wires = g.unitary.input_wires;
        for (const auto& layer : g.unitary.layers) round_trip.layers.push_back(layer);
        const Circuit inv = inverse_unitary(g.unitary);
        for (const auto& layer : inv.layers) round_trip.layers.push_back(layer);
        const DensityState in(g.unitary.input_wires,
                              random_pure_state(g.unitary.input_wires, rng).density());
        const DensityState out = apply_circuit(round_trip, in);
        CHECK((in.matrix() - out.matrix()).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("constant guesser transform lands on zero") {
    const int ell = 2;
    const Circuit t = gl_transform(constant_zero_guesser(ell));
    // no phase ever kicks, so the challenge register returns to |00>
    CHECK(outcome_probability(t, "01", "00") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(outcome_probability(t, "11", "11") == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("advantage of the builtin guessers") {
    const GLHarnessCase c = classical_point_case("10", "01");
    SUBCASE("perfect pair") {
        CHECK(measure_ip_advantage(c, parity_guesser(2), parity_guesser(2)) ==
              doctest::Approx(0.5).epsilon(1e-10));
    }
    SUBCASE("uniform flip costs a quarter per side") {
        CHECK(measure_ip_advantage(c, parity_guesser(2), noisy_parity_guesser(2)) ==
              doctest::Approx(0.25).epsilon(1e-10));
        CHECK(measure_ip_advantage(c, noisy_parity_guesser(2), noisy_parity_guesser(2)) ==
              doctest::Approx(0.5625 - 0.5).epsilon(1e-9));
    }
    SUBCASE("challenge-dependent flip") {
        CHECK(measure_ip_advantage(c, parity_guesser(2), skewed_noisy_parity_guesser(2)) ==
              doctest::Approx(0.375).epsilon(1e-10));
    }
    SUBCASE("one perfect, one coin-flip guesser") {
        // the coin side is correct with probability 1/2 independently,
        // so the simultaneous rate is exactly 1/2 and the edge vanishes
        InnerProductGuesser coin = constant_zero_guesser(2);
        coin.unitary.then(g_h(4));
        CHECK(measure_ip_advantage(c, parity_guesser(2), coin) ==
              doctest::Approx(0.0).epsilon(1e-10));
        // two coin guessers are jointly correct only a quarter of the
        // time, which sits below the baseline
        CHECK(measure_ip_advantage(c, coin, coin) == doctest::Approx(-0.25).epsilon(1e-10));
    }
}

TEST_CASE("string success of transformed guessers") {
    const GLHarnessCase c = classical_point_case("10", "01");
    SUBCASE("perfect guessers extract both strings") {
        const Circuit tb = gl_transform(parity_guesser(2));
        CHECK(measure_string_success(c, tb, tb) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("uniform flips cancel coherently") {
        const Circuit tc = gl_transform(noisy_parity_guesser(2));
        CHECK(measure_string_success(c, gl_transform(parity_guesser(2)), tc) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("challenge-dependent flips survive the transform") {
        const Circuit tc = gl_transform(skewed_noisy_parity_guesser(2));
        CHECK(measure_string_success(c, gl_transform(parity_guesser(2)), tc) ==
              doctest::Approx(0.75).epsilon(1e-9));
    }
    SUBCASE("random guessers multiply their hit rates") {
        CHECK(measure_string_success(c, random_string_guesser(2, 2),
                                     random_string_guesser(2, 2)) ==
              doctest::Approx(1.0 / 16.0).epsilon(1e-9));
    }
}

TEST_CASE("cubic floor holds on the constructed suite") {
    const GLHarnessCase c = classical_point_case("10", "01");
    const auto pairs = {
        std::pair{parity_guesser(2), parity_guesser(2)},
        std::pair{parity_guesser(2), noisy_parity_guesser(2)},
        std::pair{parity_guesser(2), skewed_noisy_parity_guesser(2)},
        std::pair{noisy_parity_guesser(2), noisy_parity_guesser(2)},
        std::pair{skewed_noisy_parity_guesser(2), skewed_noisy_parity_guesser(2)},
    };
    for (const auto& [bob, charlie] : pairs) {
        const KTCheck k = kt_check(c, bob, charlie);
        CHECK(k.holds);
        CHECK(k.transformed_success >= k.kt_floor - 1e-9);
    }
    const KTCheck quarter = kt_check(c, parity_guesser(2), noisy_parity_guesser(2));
    CHECK(quarter.advantage == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(quarter.kt_floor == doctest::Approx(0.0078125).epsilon(1e-12));
    CHECK(quarter.transformed_success >= 0.0078125);
    const nlohmann::json j = kt_check_to_json(quarter);
    CHECK(j.at("holds") == true);
    CHECK(j.at("kt_floor") == doctest::Approx(0.0078125));
}

TEST_CASE("mixed distributions weight the entries") {
    GLHarnessCase c;
    c.ell = 1;
    c.b_wires = 1;
    c.c_wires = 1;
    c.entries.push_back({"1", "1", 0.5, DensityState::basis("11")});
    c.entries.push_back({"0", "1", 0.5, DensityState::basis("01")});
    const Circuit t = gl_transform(parity_guesser(1));
    CHECK(measure_string_success(c, t, t) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(measure_ip_advantage(c, parity_guesser(1), parity_guesser(1)) ==
          doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("monte-carlo advantage brackets the exact value") {
    const GLHarnessCase c = classical_point_case("10", "01");
    const GLEstimate est =
        measure_ip_advantage_mc(c, parity_guesser(2), skewed_noisy_parity_guesser(2), 13, 4000);
    CHECK(std::abs(est.value - 0.375) <= 4 * est.std_error + 1e-12);
    const GLEstimate again =
        measure_ip_advantage_mc(c, parity_guesser(2), skewed_noisy_parity_guesser(2), 13, 4000);
    CHECK(est.value == again.value);
}

TEST_CASE("prep-only circuits dilate automatically") {
    // the uniform-flip guesser written with inline preps instead of
    // declared work wires
    Circuit raw;
    raw.input_wires = 4;  // challenge 2 + side 2
    raw.then(g_prep());   // output accumulator at 4
    raw.then(g_tof(0, 2, 4)).then(g_tof(1, 3, 4));
    raw.then(g_prep()).then(g_prep());  // flip drivers at 5, 6
    raw.then(g_h(5)).then(g_h(6));
    raw.then(g_tof(5, 6, 4));
    const InnerProductGuesser g = dilate_guesser(raw, 2, 4);
    CHECK(g.side_wires == 2);
    CHECK(g.ancillas == 3);
    const GLHarnessCase c = classical_point_case("10", "01");
    CHECK(measure_ip_advantage(c, parity_guesser(2), g) == doctest::Approx(0.25).epsilon(1e-10));

    Circuit traced;
    traced.input_wires = 4;
    traced.then(g_trace(3));
    CHECK_THROWS_AS(dilate_guesser(traced, 2, 0), std::invalid_argument);
}

TEST_CASE("shape validation and caps") {
    const GLHarnessCase c = classical_point_case("10", "01");
    CHECK_THROWS_AS(measure_ip_advantage(c, parity_guesser(1), parity_guesser(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(measure_string_success(c, random_string_guesser(1, 2),
                                           random_string_guesser(2, 2)),
                    std::invalid_argument);
    SimLimits tight;
    tight.max_statevector_wires = 4;
    CHECK_THROWS_AS(gl_transform(parity_guesser(2), tight), resource_error);

    GLHarnessCase bad = c;
    bad.entries[0].weight = 0.7;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

}  // TEST_SUITE
