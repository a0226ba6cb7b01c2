#include <doctest.h>

#include <cmath>
#include <random>

#include "quclone/channel.hpp"
#include "quclone/circuit_text.hpp"
#include "quclone/compile.hpp"

using namespace quclone;

namespace {

// Hand 2x2 matrix-product oracle for single-qubit gate strings on |0>,
// kept independent of the simulator under test.
Vec chain_on_zero(const std::vector<Mat>& gates) {
    Vec v(2);
    v << 1.0, 0.0;
    for (const Mat& g : gates) v = g * v;
    return v;
}

constexpr double kCos8Sq = 0.8535533905932737;  // cos^2(pi/8) = 1/2 + 1/(2 sqrt 2)
constexpr double kInvSqrt2 = 0.7071067811865476;

}  // namespace

TEST_SUITE_BEGIN("qsim");

TEST_CASE("zero-wire states are scalars") {
    PureState eps(0);
    CHECK(eps.dim() == 1);
    eps.validate();
    DensityState deps(0);
    CHECK(deps.dim() == 1);
    deps.validate();
    CHECK(deps.matrix()(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("state validation rejects bad norms and traces") {
    Vec v(2);
    v << 0.5, 0.5;
    CHECK_THROWS_AS(PureState(1, v).validate(), std::invalid_argument);
    Mat m = Mat::Identity(2, 2);  // trace 2
    CHECK_THROWS_AS(DensityState(1, m).validate(), std::invalid_argument);
    Mat neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;  // trace 1 but not PSD
    CHECK_THROWS_AS(DensityState(1, neg).validate(), std::invalid_argument);
}

TEST_CASE("wiesner_encode pins the conjugate-coding amplitudes") {
    PureState s = wiesner_encode("1", "1");
    CHECK(s.amplitudes()(0).real() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(s.amplitudes()(1).real() == doctest::Approx(-kInvSqrt2).epsilon(1e-12));

    // per-basis orthonormality of the four single-qubit code states
    for (char theta : {'0', '1'}) {
        PureState a = wiesner_encode("0", Bits(1, theta));
        PureState b = wiesner_encode("1", Bits(1, theta));
        CHECK(std::abs(a.overlap(b)) < 1e-12);
        CHECK(std::abs(a.overlap(a) - cplx(1.0)) < 1e-12);
    }

    // multi-qubit case factorizes
    PureState two = wiesner_encode("10", "01");
    PureState byhand = wiesner_encode("1", "0").tensor(wiesner_encode("0", "1"));
    CHECK(std::abs(two.overlap(byhand) - cplx(1.0)) < 1e-12);
}

TEST_CASE("H T H on |0> hits cos^2(pi/8)") {
    // oracle: explicit 2x2 chain
    Vec v = chain_on_zero({gate_matrix(GateKind::Hadamard), gate_matrix(GateKind::PhaseShift),
                           gate_matrix(GateKind::Hadamard)});
    CHECK(std::norm(v(0)) == doctest::Approx(kCos8Sq).epsilon(1e-12));

    // simulator under test: PREP ; H ; T ; H from zero input wires
    Circuit c;
    c.then(g_prep()).then(g_h(0)).then(g_t(0)).then(g_h(0));
    CHECK(c.output_wires() == 1);
    CHECK(outcome_probability(c, "", "0") == doctest::Approx(kCos8Sq).epsilon(1e-12));
}

TEST_CASE("trace_distance of |0> vs |+> is 1/sqrt(2)") {
    DensityState zero = DensityState::basis("0");
    DensityState plus = DensityState::from_pure(wiesner_encode("0", "1"));
    CHECK(trace_distance(zero, plus) == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    // identical states
    CHECK(trace_distance(zero, zero) == doctest::Approx(0.0));
    // orthogonal states
    CHECK(trace_distance(zero, DensityState::basis("1")) == doctest::Approx(1.0));
    // mixed case exercises the spectral path: maximally mixed vs |0><0|
    Mat mixed = Mat::Identity(2, 2) / 2.0;
    CHECK(trace_distance(DensityState(1, mixed), zero) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("macro truth tables match their expansions on all basis inputs") {
    auto truth = [](const Circuit& c, const Bits& in) {
        std::vector<double> p = output_distribution(c, in);
        int best = -1;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] > 0.5) best = static_cast<int>(i);
        return best;
    };

    SUBCASE("PauliX") {
        for (Bits in : {Bits("0"), Bits("1")}) {
            Circuit m;
            m.input_wires = 1;
            m.then(g_x(0));
            const int direct = truth(m, in);
            const int expanded = truth(expand_macros(m), in);
            CHECK(direct == expanded);
            CHECK(direct == (in == "0" ? 1 : 0));
        }
    }
    SUBCASE("CNOT") {
        for (std::uint64_t i = 0; i < 4; ++i) {
            const Bits in = index_to_bits(i, 2);
            Circuit m;
            m.input_wires = 2;
            m.then(g_cnot(0, 1));
            const int direct = truth(m, in);
            const int expanded = truth(expand_macros(m), in);
            CHECK(direct == expanded);
            const int want = static_cast<int>((i & 2) | (((i >> 1) ^ i) & 1));
            CHECK(direct == want);
        }
    }
    SUBCASE("PauliZ flips the conjugate basis") {
        // H Z H = X, so PREP ; H ; Z ; H must land on |1>
        Circuit c;
        c.then(g_prep()).then(g_h(0)).then(g_z(0)).then(g_h(0));
        CHECK(outcome_probability(c, "", "1") == doctest::Approx(1.0).epsilon(1e-12));
        Circuit e = expand_macros(c);
        CHECK(outcome_probability(e, "", "1") == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gate cost counts primitives after macro expansion") {
    CHECK(gate_cost(empty_circuit()) == 0);

    Circuit h;
    h.input_wires = 1;
    h.then(g_h(0));
    CHECK(gate_cost(h) == 1);

    // Expansion: PREP, then X = H T T T T H on the ancilla, Toffoli, TraceOut.
    Circuit cn;
    cn.input_wires = 2;
    cn.then(g_cnot(0, 1));
    CHECK(gate_cost(cn) == 9);

    Circuit x;
    x.input_wires = 1;
    x.then(g_x(0));
    CHECK(gate_cost(x) == 6);

    Circuit z;
    z.input_wires = 1;
    z.then(g_z(0));
    CHECK(gate_cost(z) == 4);
}

TEST_CASE("wire bookkeeping tracks preps and traces") {
    Circuit c;
    c.input_wires = 1;
    c.then(g_prep());        // 2 wires
    c.then(g_cnot(0, 1));    // still 2
    c.then(g_trace(0));      // 1 wire
    CHECK(c.output_wires() == 1);
    CHECK(c.peak_wires() == 3);  // CNOT macro ancilla counts

    Circuit bad;
    bad.input_wires = 1;
    bad.then(g_h(1));
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    Circuit dup;
    dup.input_wires = 2;
    dup.layer({g_h(0), g_t(0)});
    CHECK_THROWS_AS(dup.validate(), std::invalid_argument);

    Circuit dup_tof;
    dup_tof.input_wires = 3;
    dup_tof.then(Gate{GateKind::Toffoli, {0, 1, 1}});
    CHECK_THROWS_AS(dup_tof.validate(), std::invalid_argument);
}

TEST_CASE("mid-circuit trace decoheres a copied qubit") {
    // prep |+>, copy with CNOT, trace the copy: the survivor is maximally mixed
    Circuit c;
    c.then(g_prep()).then(g_h(0)).then(g_prep()).then(g_cnot(0, 1)).then(g_trace(1));
    c.then(g_h(0));  // a unitary after the trace forces the density path
    DensityState out = apply_circuit(c, DensityState(0));
    CHECK(out.wires() == 1);
    CHECK(out.matrix()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(out.matrix()(0, 1)) < 1e-9);
}

TEST_CASE("statevector and density paths agree on random unitary circuits") {
    std::mt19937_64 rng(0xC0FFEE01);
    std::uniform_int_distribution<int> wire_count(2, 4);
    std::uniform_int_distribution<int> gate_count(1, 12);
    std::uniform_int_distribution<int> kind_pick(0, 5);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = wire_count(rng);
        Circuit c;
        c.input_wires = w;
        const int n = gate_count(rng);
        std::uniform_int_distribution<int> wp(0, w - 1);
        for (int i = 0; i < n; ++i) {
            switch (kind_pick(rng)) {
                case 0: c.then(g_h(wp(rng))); break;
                case 1: c.then(g_t(wp(rng))); break;
                case 2: {
                    int a = wp(rng), b = wp(rng);
                    if (a != b) c.then(g_cnot(a, b));
                    break;
                }
                case 3: c.then(g_x(wp(rng))); break;
                case 4: c.then(g_z(wp(rng))); break;
                default: {
                    if (w >= 3) {
                        int a = wp(rng), b = wp(rng), d = wp(rng);
                        if (a != b && b != d && a != d) c.then(g_tof(a, b, d));
                    }
                    break;
                }
            }
        }
        const Bits in = index_to_bits(rng() & ((1u << w) - 1), w);
        const std::vector<double> sv = output_distribution(c, in);
        const std::vector<double> dm = output_distribution(c, DensityState::basis(in));
        REQUIRE(sv.size() == dm.size());
        for (std::size_t i = 0; i < sv.size(); ++i) CHECK(sv[i] == doctest::Approx(dm[i]).epsilon(1e-9));
    }
}

TEST_CASE("trailing trace suffix stays on the statevector path and matches density") {
    // Entangle three wires, then trace two of them.
    Circuit c;
    c.input_wires = 2;
    c.then(g_h(0)).then(g_cnot(0, 1)).then(g_prep()).then(g_tof(0, 1, 2));
    c.then(g_trace(1)).then(g_trace(0));
    const std::vector<double> fast = output_distribution(c, "00");
    const std::vector<double> slow = output_distribution(c, DensityState::basis("00"));
    REQUIRE(fast.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
}

TEST_CASE("resource caps reject oversized simulations") {
    SimLimits tight;
    tight.max_density_wires = 2;
    Circuit c;
    c.input_wires = 2;
    c.then(g_prep());
    c.then(g_trace(0));
    c.then(g_h(0));  // forces density path (work after trace)
    CHECK_THROWS_AS(apply_circuit(c, DensityState(2), tight), resource_error);

    SimLimits tiny;
    tiny.max_megabytes = 0;
    CHECK_THROWS_AS(output_distribution(Circuit{2, {{g_h(0)}}}, "00", tiny), resource_error);
}

TEST_CASE("circuit text round trips and rejects junk") {
    Circuit c;
    c.input_wires = 2;
    c.layer({g_h(0), g_t(1)});
    c.then(g_tof(0, 1, 1 + 1));  // needs a third wire: add prep first
    c.layers.clear();
    c.layer({g_h(0), g_t(1)});
    c.then(g_prep());
    c.then(g_tof(0, 1, 2));
    c.then(g_trace(1));
    c.then(g_cnot(0, 1));
    const std::string text = format_circuit_text(c);
    Circuit back = parse_circuit_text(text);
    CHECK(back == c);

    const std::string commented = "# a comment\n\nwires 1\nH@0\n# trailing note\nX@0\n";
    Circuit fromtext = parse_circuit_text(commented);
    CHECK(fromtext.input_wires == 1);
    CHECK(fromtext.layers.size() == 2);

    CHECK_THROWS_AS(parse_circuit_text("wires 1\nH@5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_circuit_text("wires 1\nFOO@0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_circuit_text("H@0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_circuit_text("wires 1\nTOF@0,0,0\n"), std::invalid_argument);
}

TEST_CASE("choi matrices of the reference channels") {
    ChoiChannel id = identity_channel(1);
    id.validate();
    CHECK(id.j.trace().real() == doctest::Approx(2.0));
    // J(id) = |Omega><Omega| with Omega = |00> + |11>
    Mat omega = Mat::Zero(4, 4);
    omega(0, 0) = omega(0, 3) = omega(3, 0) = omega(3, 3) = 1.0;
    CHECK((id.j - omega).cwiseAbs().maxCoeff() < 1e-12);

    ChoiChannel dep = depolarizing_channel();
    dep.validate();
    CHECK((dep.j - Mat::Identity(4, 4) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
    // action: everything lands on I/2
    Mat out = channel_apply(dep, DensityState::basis("1").matrix());
    CHECK((out - Mat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kraus validation and choi round trip") {
    KrausChannel meas;
    meas.in_wires = 1;
    meas.out_wires = 1;
    Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
    k0(0, 0) = 1.0;
    k1(1, 1) = 1.0;
    meas.ops = {k0, k1};
    meas.validate();

    ChoiChannel choi = choi_of(meas);
    choi.validate();
    KrausChannel back = kraus_from_choi(choi);
    back.validate();
    ChoiChannel again = choi_of(back);
    CHECK((choi.j - again.j).cwiseAbs().maxCoeff() < 1e-9);

    KrausChannel broken = meas;
    broken.ops.pop_back();
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}

TEST_CASE("random channels validate and compose") {
    std::mt19937_64 rng(0xC0FFEE02);
    for (int t = 0; t < 10; ++t) {
        ChoiChannel ch = random_channel(1, 2, 1, rng);
        ch.validate();
        Mat out = channel_apply(ch, DensityState::basis("0").matrix());
        CHECK(out.trace().real() == doctest::Approx(1.0).epsilon(1e-9));
        DensityState ds(2, (out + out.adjoint()) / 2.0);
        ds.validate();
    }
}

TEST_CASE("circuit_choi agrees with direct application") {
    std::mt19937_64 rng(0xC0FFEE03);
    Circuit c;
    c.input_wires = 2;
    c.then(g_h(0)).then(g_cnot(0, 1)).then(g_t(1)).then(g_trace(0));
    ChoiChannel ch = circuit_choi(c);
    ch.validate();
    for (int t = 0; t < 5; ++t) {
        PureState psi = random_pure_state(2, rng);
        Mat via_choi = channel_apply(ch, psi.density());
        Mat direct = apply_circuit(c, DensityState::from_pure(psi)).matrix();
        CHECK((via_choi - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("channel subset application matches full tensor application") {
    std::mt19937_64 rng(0xC0FFEE04);
    ChoiChannel ch = random_channel(1, 1, 1, rng);
    ChoiChannel idc = identity_channel(2);
    // apply to middle wire of a 3-wire state, compare against permute+tensor
    PureState psi = random_pure_state(3, rng);
    Mat via_subset = channel_apply_to(ch, psi.density(), 3, {1});
    // by hand: permute wire 1 to front, apply (ch (x) id2)
    Mat moved = permute_qubits(psi.density(), 3, {1, 0, 2});
    Mat full = channel_apply(channel_tensor(ch, idc), moved);
    CHECK((via_subset - full).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("classical function channels measure-then-compute") {
    ChoiChannel parity = classical_function_channel(2, 1, [](const Bits& b) {
        return Bits(1, dot2(b, "11") ? '1' : '0');
    });
    parity.validate();
    Mat out = channel_apply(parity, DensityState::basis("11").matrix());
    CHECK(out(0, 0).real() == doctest::Approx(1.0));
    // superposition input decoheres: |++> has uniform parity
    Mat plus2 = wiesner_encode("00", "11").density();
    Mat p = channel_apply(parity, plus2);
    CHECK(p(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(p(0, 1)) < 1e-12);
}

TEST_CASE("compiled controlled-H equals the block unitary") {
    Circuit c;
    c.input_wires = 2;
    append_controlled_h(c, 0, 1);
    ChoiChannel ch = circuit_choi(c);
    Mat want = Mat::Identity(4, 4);
    const double s = 1.0 / std::sqrt(2.0);
    want(2, 2) = s;
    want(2, 3) = s;
    want(3, 2) = s;
    want(3, 3) = -s;
    // Compare channels (global phase drops out of the Choi form).
    ChoiChannel direct;
    direct.in_wires = 2;
    direct.out_wires = 2;
    KrausChannel ku{2, 2, {want}};
    direct = choi_of(ku);
    CHECK((ch.j - direct.j).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("compiled R_y(pi/4) produces the Breidbart amplitudes") {
    Circuit c;
    c.then(g_prep());
    append_ry45(c, 0);
    const std::vector<double> p = output_distribution(c, "");
    CHECK(p[0] == doctest::Approx(kCos8Sq).epsilon(1e-12));

    // inverse really inverts
    Circuit round;
    round.then(g_prep());
    append_ry45(round, 0);
    append_ry45_inv(round, 0);
    CHECK(outcome_probability(round, "", "0") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inverse_unitary round trips random unitary circuits") {
    std::mt19937_64 rng(0xC0FFEE05);
    for (int t = 0; t < 10; ++t) {
        Circuit c;
        c.input_wires = 3;
        std::uniform_int_distribution<int> wp(0, 2);
        for (int i = 0; i < 8; ++i) {
            switch (rng() % 4) {
                case 0: c.then(g_h(wp(rng))); break;
                case 1: c.then(g_t(wp(rng))); break;
                case 2: {
                    int a = wp(rng), b = wp(rng);
                    if (a != b) c.then(g_cnot(a, b));
                    break;
                }
                default: c.then(g_z(wp(rng))); break;
            }
        }
        Circuit inv = inverse_unitary(c);
        Circuit both = c;
        for (const auto& l : inv.layers) both.layers.push_back(l);
        const Bits in = index_to_bits(rng() & 7u, 3);
        CHECK(outcome_probability(both, in, in) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("and-chain computes conjunctions") {
    for (std::uint64_t i = 0; i < 8; ++i) {
        Circuit c;
        c.input_wires = 3;
        const int res = append_and_chain(c, {0, 1, 2}, 3);
        for (int wq = res - 1; wq >= 0; --wq) c.then(g_trace(wq));
        const Bits in = index_to_bits(i, 3);
        CHECK(outcome_probability(c, in, "1") == doctest::Approx(i == 7 ? 1.0 : 0.0));
    }

    // degenerate arities
    Circuit none;
    none.input_wires = 0;
    const int r0 = append_and_chain(none, {}, 0);
    CHECK(outcome_probability(none, "", "1") == doctest::Approx(1.0));
    CHECK(r0 == 0);

    Circuit one;
    one.input_wires = 1;
    const int r1 = append_and_chain(one, {0}, 1);
    CHECK(r1 == 1);
    one.then(g_trace(0));
    CHECK(outcome_probability(one, "1", "1") == doctest::Approx(1.0));
    CHECK(outcome_probability(one, "0", "1") == doctest::Approx(0.0));
}

TEST_SUITE_END();
