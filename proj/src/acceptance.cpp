#include "quclone/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "quclone/advice.hpp"
#include "quclone/compile.hpp"
#include "quclone/games.hpp"
#include "quclone/gates.hpp"
#include "quclone/mlr.hpp"
#include "quclone/search_lift.hpp"
#include "quclone/simul_gl.hpp"

namespace quclone {

namespace {

std::uint64_t mix(std::uint64_t seed, const char* id) { return seed ^ fnv1a(id); }

CheckLine check_eq(std::string name, double measured, double expected, double tol) {
    return {std::move(name), "==", measured, expected, tol, std::abs(measured - expected) <= tol};
}

CheckLine check_le(std::string name, double measured, double bound, double tol) {
    return {std::move(name), "<=", measured, bound, tol, measured <= bound + tol};
}

CheckLine check_ge(std::string name, double measured, double bound, double tol) {
    return {std::move(name), ">=", measured, bound, tol, measured >= bound - tol};
}

void settle(CriterionOutcome& out) {
    out.pass = !out.checks.empty();
    for (const CheckLine& c : out.checks) out.pass = out.pass && c.pass;
}

// --- 1: cloning game ---------------------------------------------------------

CriterionOutcome crit_cloning(Suite suite, std::uint64_t seed, const SimLimits& limits) {
    CriterionOutcome out{"cloning",
                         "random single-qubit cloning channels stay under 3/4, the solver "
                         "attains it, measure-and-duplicate scores 5/8",
                         {},
                         false,
                         0.0};
    std::mt19937_64 rng(mix(seed, "cloning"));
    const int trials = suite == Suite::full ? 200 : 50;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const CloningAttack atk{random_channel(1, 2, 1 + t % 2, rng)};
        worst = std::max(worst, eval_cloning(atk, 1, limits));
    }
    out.checks.push_back(check_le("worst random channel at n=1", worst, cloning_bound(1), 1e-9));
    if (suite == Suite::full) {
        double worst2 = 0.0;
        for (int t = 0; t < 25; ++t) {
            const CloningAttack atk{random_channel(2, 4, 1, rng)};
            worst2 = std::max(worst2, eval_cloning(atk, 2, limits));
        }
        out.checks.push_back(
            check_le("worst random channel at n=2", worst2, cloning_bound(2), 1e-9));
    }
    out.checks.push_back(check_eq("solver value", optimal_cloning_sdp(1).value, 0.75, 1e-3));
    out.checks.push_back(check_eq("measure-and-duplicate value",
                                  eval_cloning(measure_duplicate_attack(1), 1, limits), 0.625,
                                  1e-9));
    settle(out);
    return out;
}

// --- 2: monogamy game --------------------------------------------------------

CriterionOutcome crit_moe(Suite suite, std::uint64_t seed, const SimLimits& limits) {
    CriterionOutcome out{"moe",
                         "the intermediate-basis strategy attains the split-game bound, random "
                         "strategies stay under it, the see-saw reaches 0.85",
                         {},
                         false,
                         0.0};
    out.checks.push_back(check_eq("intermediate-basis value at n=1",
                                  eval_moe(breidbart_strategy(1), 1, limits), moe_bound(1), 1e-9));
    out.checks.push_back(check_eq("intermediate-basis value at n=2",
                                  eval_moe(breidbart_strategy(2), 2, limits),
                                  moe_bound(1) * moe_bound(1), 1e-9));
    std::mt19937_64 rng(mix(seed, "moe"));
    const int trials = suite == Suite::full ? 100 : 50;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        MoEStrategy s;
        s.splitter = random_channel(1, 2, 1, rng);
        s.bob = random_channel(2, 1, 1, rng);
        s.charlie = random_channel(2, 1, 1, rng);
        s.b_wires = 1;
        s.c_wires = 1;
        worst = std::max(worst, eval_moe(s, 1, limits));
    }
    out.checks.push_back(check_le("worst random strategy at n=1", worst, moe_bound(1), 1e-9));
    const GameValueReport ss = see_saw_moe(mix(seed, "moe-seesaw"), 40, 5);
    out.checks.push_back(check_ge("see-saw best of 5 seeds", ss.value, 0.85, 0.0));
    out.checks.push_back(check_le("see-saw under the bound", ss.value, moe_bound(1), 1e-6));
    settle(out);
    return out;
}

// --- 3: wrapper identities -----------------------------------------------------

MoEStrategy strategy_from_circuits(const MoECircuits& mc, const SimLimits& limits) {
    MoEStrategy s;
    s.splitter = circuit_choi(mc.a, limits);
    s.bob = circuit_choi(mc.b, limits);
    s.charlie = circuit_choi(mc.c, limits);
    s.b_wires = mc.b_wires;
    s.c_wires = mc.c_wires;
    return s;
}

CriterionOutcome crit_wrappers(Suite, std::uint64_t, const SimLimits& limits) {
    CriterionOutcome out{
        "wrappers", "single-output wrapper circuits reproduce direct game values", {}, false, 0.0};
    double dev = 0.0;

    // cloning-side attacks given as circuits
    std::vector<std::pair<Circuit, int>> attacks;
    for (int n : {1, 2}) {
        Circuit keep;
        keep.input_wires = n;
        for (int i = 0; i < n; ++i) keep.then(g_prep());
        attacks.emplace_back(keep, n);
        attacks.emplace_back(transversal_copier(n), n);
    }
    Circuit rotated = transversal_copier(1);
    rotated.layers.insert(rotated.layers.begin(), {g_h(0)});
    attacks.emplace_back(rotated, 1);
    Circuit phased = transversal_copier(1);
    phased.layers.insert(phased.layers.begin(), {g_t(0)});
    attacks.emplace_back(phased, 1);
    for (const auto& [atk, n] : attacks) {
        const double direct = eval_cloning(CloningAttack{circuit_choi(atk, limits)}, n, limits);
        const double wrapped = wrapper_average(build_money_wrapper(atk, n), 2 * n, limits);
        dev = std::max(dev, std::abs(direct - wrapped));
    }

    // split-game strategies given as circuits
    std::vector<MoECircuits> strategies{breidbart_circuits(), forward_to_bob_circuits()};
    {
        MoECircuits mc;  // splitter routes the state to the second share
        mc.b_wires = 1;
        mc.c_wires = 1;
        mc.a.input_wires = 1;
        mc.a.then(g_prep());
        mc.a.then(g_cnot(0, 1)).then(g_cnot(1, 0)).then(g_cnot(0, 1));
        mc.b.input_wires = 2;
        mc.b.then(g_trace(0));
        mc.c.input_wires = 2;
        append_controlled_h(mc.c, 1, 0);
        mc.c.then(g_trace(1));
        strategies.push_back(mc);
    }
    for (const MoECircuits& mc : strategies) {
        const double direct = eval_moe(strategy_from_circuits(mc, limits), 1, limits);
        const Circuit w = build_tfkw_wrapper(mc.a, mc.b, mc.c, mc.b_wires, mc.c_wires, 1);
        dev = std::max(dev, std::abs(direct - wrapper_average(w, 2, limits)));
    }

    out.checks.push_back(check_le("worst wrapper deviation", dev, 0.0, 1e-8));
    settle(out);
    return out;
}

// --- 4: diagonalization ----------------------------------------------------------

CriterionOutcome crit_diagonalization(Suite, std::uint64_t, const SimLimits& limits) {
    CriterionOutcome out{"diagonalization",
                         "every diagonalized entry dodges all scheduled generators and the "
                         "union counting bound holds",
                         {},
                         false,
                         0.0};
    IngenConfig cfg = default_ingen_config(
        [](std::uint64_t n) { return static_cast<int>(std::min<std::uint64_t>(n, 10)); });
    cfg.limits = limits;
    const std::uint64_t horizon = 24;
    const SequencePrefix prefix = diagonalize(cfg, horizon);

    double bound_violations = 0.0;
    double length_violations = 0.0;
    for (const EntryAudit& audit : prefix.audits) {
        const int l = cfg.ell(audit.n);
        if (static_cast<double>(audit.union_size) >= std::ldexp(1.0, l)) bound_violations += 1.0;
        if (prefix.entries[audit.n].size() != static_cast<std::size_t>(l))
            length_violations += 1.0;
    }
    double witness_failures = 0.0;
    for (std::uint64_t t = 0; t <= horizon; ++t)
        if (!witness_check(prefix, t).all_pass) witness_failures += 1.0;

    out.checks.push_back(check_eq("counting-bound violations", bound_violations, 0.0, 0.0));
    out.checks.push_back(check_eq("entry-length violations", length_violations, 0.0, 0.0));
    out.checks.push_back(check_eq("witness failures over t <= 24", witness_failures, 0.0, 0.0));
    settle(out);
    return out;
}

// --- 5: decision-to-search -----------------------------------------------------

CriterionOutcome crit_search_lift(Suite suite, std::uint64_t seed, const SimLimits&) {
    CriterionOutcome out{"search-lift",
                         "the per-string search bound holds exactly, the sampler matches the "
                         "exact law, expected set size is the probability sum",
                         {},
                         false,
                         0.0};
    std::mt19937_64 rng(mix(seed, "search-lift"));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int trials = suite == Suite::full ? 400 : 200;
    double bound_failures = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int n = 1 + t % 3;
        std::vector<double> p(std::size_t{1} << n);
        for (auto& v : p) v = unif(rng);
        const DecisionOracle oracle = DecisionOracle::from_table(n, p);
        if (!verify_search_bound(oracle, lift_exact(oracle)).all_hold) bound_failures += 1.0;
    }
    out.checks.push_back(check_eq("bound violations over random oracles", bound_failures, 0.0, 0.0));

    double max_z = 0.0;
    for (int n = 1; n <= 3; ++n) {
        std::vector<double> p(std::size_t{1} << n);
        for (auto& v : p) v = unif(rng);
        const DecisionOracle oracle = DecisionOracle::from_table(n, p);
        const SearchDistribution exact = lift_exact(oracle);
        const std::uint64_t samples = 1000000;
        const SearchDistribution drawn = lift_sampled(oracle, mix(seed, "search-sampler"), samples);
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
            const double q = exact.prob(s);
            const double freq =
                static_cast<double>(drawn.counts[s]) / static_cast<double>(samples);
            const double sigma = std::sqrt(q * (1.0 - q) / static_cast<double>(samples));
            if (sigma > 0.0) max_z = std::max(max_z, std::abs(freq - q) / sigma);
        }
    }
    out.checks.push_back(check_le("sampler z-score at 10^6 draws", max_z, 4.0, 0.0));

    std::vector<double> p(8);
    double sum = 0.0;
    for (auto& v : p) sum += (v = unif(rng));
    out.checks.push_back(check_eq("expected set size", expected_set_size(p), sum, 1e-12));
    const SetSizeCheck sc = expected_set_size_check(p, mix(seed, "set-size"), 200000);
    out.checks.push_back(
        check_eq("set-size sampler within 4 sigma", sc.within_4_sigma ? 1.0 : 0.0, 1.0, 0.0));
    settle(out);
    return out;
}

// --- 6: extraction transform ----------------------------------------------------

CriterionOutcome crit_goldreich_levin(Suite, std::uint64_t, const SimLimits& limits) {
    CriterionOutcome out{"goldreich-levin",
                         "the extraction transform recovers the string from a perfect guesser "
                         "and clears the cubic floor on a noisy one",
                         {},
                         false,
                         0.0};
    double min_recovery = 1.0;
    for (int ell = 1; ell <= 3; ++ell) {
        const Circuit t = gl_transform(parity_guesser(ell), limits);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << ell); ++v) {
            const Bits x = index_to_bits(v, ell);
            min_recovery = std::min(min_recovery, outcome_probability(t, x, x, limits));
        }
    }
    out.checks.push_back(check_eq("perfect-guesser recovery", min_recovery, 1.0, 1e-9));

    const GLHarnessCase c = classical_point_case("10", "01");
    const KTCheck k = kt_check(c, parity_guesser(2), noisy_parity_guesser(2), limits);
    out.checks.push_back(check_eq("noisy-pair advantage", k.advantage, 0.25, 1e-10));
    out.checks.push_back(check_eq("cubic floor", k.kt_floor, 0.0078125, 1e-12));
    out.checks.push_back(
        check_ge("simultaneous string success", k.transformed_success, 0.0078125, 0.0));
    settle(out);
    return out;
}

// --- 7: promise problem -----------------------------------------------------------

PromiseSpec battery_spec() {
    PromiseSpec s;
    s.entries = {{"", ""}, {"1", "1"}, {"10", "01"}, {"101", "010"}, {"1010", "0110"}};
    return s;
}

Circuit honest_with_encoder(int lam) {
    Circuit c;
    c.input_wires = 3 * lam;
    for (int i = 0; i < lam; ++i) append_controlled_h(c, lam + i, i);
    const Circuit honest = build_honest_circuit(2 * lam);
    for (const auto& layer : honest.layers) c.layers.push_back(layer);
    return c;
}

CriterionOutcome crit_promise(Suite, std::uint64_t seed, const SimLimits& limits) {
    CriterionOutcome out{"promise",
                         "the honest decoder is always right, forwarding to one guesser scores "
                         "1/2, instance sampling is uniform",
                         {},
                         false,
                         0.0};
    const PromiseSpec spec = battery_spec();

    double min_correct = 1.0;
    for (int lam = 1; lam <= 3; ++lam) {
        const Circuit c = honest_with_encoder(lam);
        for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << lam); ++xv)
            for (std::uint64_t tv = 0; tv < (std::uint64_t{1} << lam); ++tv)
                for (std::uint64_t yv = 0; yv < (std::uint64_t{1} << lam); ++yv) {
                    const Bits x = index_to_bits(xv, lam);
                    const Bits th = index_to_bits(tv, lam);
                    const Bits y = index_to_bits(yv, lam);
                    const Bits want(1, dot2(x, y) ? '1' : '0');
                    min_correct =
                        std::min(min_correct, outcome_probability(c, x + th + y, want, limits));
                }
    }
    out.checks.push_back(check_eq("honest correctness through lambda=3", min_correct, 1.0, 1e-9));

    const SplitAttackResult fwd =
        eval_split_attack(spec, forward_to_bob_split(2), 2, 1, 4096, limits);
    out.checks.push_back(check_eq("forward-to-one-guesser value at lambda=2", fwd.value, 0.5, 1e-9));

    const std::uint64_t lam = 4;
    const std::uint64_t n = 2 * lam;
    const std::uint64_t samples = 100000;
    std::mt19937_64 rng(mix(seed, "promise-sampler"));
    std::vector<std::uint64_t> counts(std::size_t{1} << lam, 0);
    const InstanceDistribution dist = promise_distribution(spec, n);
    for (std::uint64_t i = 0; i < samples; ++i) {
        const Bits w = sample_instance(spec, n, rng);
        // every instance shares the planted theta prefix; the tail indexes it
        counts[bits_to_index(w.substr(lam))] += 1;
    }
    const double cell = 1.0 / static_cast<double>(std::size_t{1} << lam);
    const double sigma = std::sqrt(cell * (1.0 - cell) / static_cast<double>(samples));
    double max_z = 0.0;
    std::uint64_t support = 0;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << lam); ++y) {
        const Bits w = spec.entries[lam].theta + index_to_bits(y, static_cast<int>(lam));
        const double q = dist.prob(w);
        if (q > 0.0) {
            support += 1;
            const double freq = static_cast<double>(counts[y]) / static_cast<double>(samples);
            max_z = std::max(max_z, std::abs(freq - cell) / sigma);
        } else if (counts[y] != 0) {
            max_z = 1e9;  // sampled something outside the support
        }
    }
    out.checks.push_back(
        check_eq("sampled support size", static_cast<double>(support), 16.0, 0.0));
    out.checks.push_back(check_le("sampler z-score over 16 cells", max_z, 4.0, 0.0));
    settle(out);
    return out;
}

// --- 8: derived language ------------------------------------------------------------

CriterionOutcome crit_language(Suite, std::uint64_t, const SimLimits&) {
    CriterionOutcome out{"language",
                         "the derived language is balanced at every length and the slowdown "
                         "map contracts",
                         {},
                         false,
                         0.0};
    const LanguageSpec ident{[](std::uint64_t) { return 2; }, [](std::uint64_t) { return 2; },
                             [](std::uint64_t, const Bits& x) { return x; }};
    const LanguageSpec keyed = prf_language("1011001110001111", 4, 4);
    double imbalance = 0.0;
    for (const LanguageSpec* lang : {&ident, &keyed}) {
        for (int n = 1; n <= 14; ++n) {
            const auto [no_count, yes_count] = balance_count(*lang, n);
            const auto half = std::uint64_t{1} << (n - 1);
            if (no_count != half || yes_count != half) imbalance += 1.0;
        }
    }
    out.checks.push_back(check_eq("unbalanced lengths through n=14", imbalance, 0.0, 0.0));

    const SlowdownMap f{};
    double contraction_violations = 0.0;
    for (std::uint64_t n = 2; n <= 10000; ++n)
        if (f(n) >= n) contraction_violations += 1.0;
    out.checks.push_back(
        check_eq("slowdown contraction violations on (1, 10^4]", contraction_violations, 0.0, 0.0));
    const std::vector<std::uint64_t> want{4, 5, 6, 7, 8};
    out.checks.push_back(check_eq("preimage of 2 is {4..8}",
                                  slowdown_preimage(f, 2) == want ? 1.0 : 0.0, 1.0, 0.0));
    settle(out);
    return out;
}

// --- 9: copy-protection harness ----------------------------------------------------

CriterionOutcome crit_copy_protection(Suite, std::uint64_t, const SimLimits& limits) {
    CriterionOutcome out{"copy-protection",
                         "the classical-copy scheme is correct but duplicable; attack values "
                         "honor the domain and baseline conventions",
                         {},
                         false,
                         0.0};
    const KeyedMap and_map = [](const Bits& k, const Bits& x) -> std::optional<Bits> {
        return Bits(1, dot2(k, x) ? '1' : '0');
    };
    const CPScheme cc = classical_copy_scheme(1, 1, 1, and_map);
    const CPDistribution uni = uniform_triples(1, 1);

    out.checks.push_back(
        check_eq("classical-copy correctness error", cp_correctness(cc, and_map, limits), 0.0,
                 1e-12));
    out.checks.push_back(check_ge(
        "duplicate-attack value",
        cp_attack_value(cc, and_map, uni, duplicate_attack(1, 1, 1, and_map), limits), 0.99, 0.0));
    const KeyedMap nothing = [](const Bits&, const Bits&) { return std::nullopt; };
    out.checks.push_back(check_eq(
        "empty-domain value",
        cp_attack_value(cc, nothing, uni, duplicate_attack(1, 1, 1, and_map), limits), 0.0, 0.0));
    out.checks.push_back(
        check_eq("trivial-attack baseline",
                 cp_attack_value(cc, and_map, uni, trivial_attack(cc, limits), limits), 0.5, 1e-9));

    // a noisy evaluator scales the baseline by its success rate
    CPScheme noisy = classical_copy_scheme(1, 1, 1, and_map);
    Circuit e = noisy.evaluate;
    e.then(g_prep());
    e.then(g_prep());
    e.then(g_h(1));
    e.then(g_h(2));
    e.then(g_tof(1, 2, 0));
    e.then(g_trace(2));
    e.then(g_trace(1));
    noisy.evaluate = e;
    const double err = cp_correctness(noisy, and_map, limits);
    out.checks.push_back(check_eq("noisy correctness error", err, 0.25, 1e-9));
    out.checks.push_back(
        check_eq("noisy trivial baseline",
                 cp_attack_value(noisy, and_map, uni, trivial_attack(noisy, limits), limits),
                 0.5 * (1.0 - err), 1e-9));
    settle(out);
    return out;
}

// --- 10: block codec, martingale, compressor ----------------------------------------

// Mirrors the published 50-case regime: families, widths, and pressures
// rotate with the case index; seeds are fixed by the index.
bool mlr_case_round_trip(int j) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(j));
    const std::size_t window = 3 + static_cast<std::size_t>(j) % 5;
    const auto ell = [j](std::uint64_t lam) {
        return static_cast<int>(1 + (static_cast<std::uint64_t>(j) + lam) % 5);
    };
    const auto draw = [&rng](std::size_t n) {
        Bits out(n, '0');
        for (auto& c : out) c = (rng() & 1u) ? '1' : '0';
        return out;
    };

    std::vector<Bits> planted;
    for (std::size_t lam = 0; lam < window; ++lam)
        planted.push_back(draw(static_cast<std::size_t>(ell(lam))));

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
    const PolyMap p = [j](std::uint64_t lam) { return (lam + static_cast<std::uint64_t>(j)) % 3; };

    std::vector<Bits> blocks;
    for (std::size_t lam = 0; lam < window; ++lam) {
        const bool from_plant = kind == 0 || (kind == 3 && lam % 2 == 0);
        if (from_plant) {
            blocks.push_back(planted[lam]);
        } else if (kind == 1) {
            Bits b = planted[lam];
            if ((rng() & 1u) == 0 && !b.empty()) b[0] = (b[0] == '0') ? '1' : '0';
            blocks.push_back(b);
        } else {
            blocks.push_back(draw(static_cast<std::size_t>(ell(lam))));
        }
    }
    const Bits residual = draw(rng() % 6);

    const CompressedBlockRecord rec = block_compress(blocks, residual, fam, p);
    if (block_decompress(rec, fam, p) != blocks) return false;
    if (rec.suffix != residual) return false;
    const std::string bytes = serialize_record(rec);
    return deserialize_record(bytes) == rec;
}

CriterionOutcome crit_mlr(Suite suite, std::uint64_t, const SimLimits&) {
    CriterionOutcome out{"mlr",
                         "block compression round trips, the martingale matches its closed "
                         "form, the numeral pins hold byte-exact",
                         {},
                         false,
                         0.0};
    const int cases = suite == Suite::full ? 100 : 50;
    double failures = 0.0;
    for (int j = 0; j < cases; ++j)
        if (!mlr_case_round_trip(j)) failures += 1.0;
    out.checks.push_back(check_eq("round-trip failures", failures, 0.0, 0.0));

    const auto odd = [](std::uint64_t i) { return 2 * i + 1; };
    const auto all = [](std::uint64_t i) { return i + 1; };
    const auto powers = [](std::uint64_t i) { return std::uint64_t{1} << i; };
    double mismatches = 0.0;
    for (int len = 0; len <= 12; ++len) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
            const Bits x = index_to_bits(v, len);
            for (const auto& L : {std::function<std::uint64_t(std::uint64_t)>(odd),
                                  std::function<std::uint64_t(std::uint64_t)>(all),
                                  std::function<std::uint64_t(std::uint64_t)>(powers)}) {
                BigInt want = 1;
                for (std::uint64_t i = 0; L(i) <= static_cast<std::uint64_t>(len); ++i) {
                    if (x[static_cast<std::size_t>(L(i) - 1)] == '1') {
                        want = 0;
                        break;
                    }
                    want *= 2;
                }
                if (martingale(L, x) != want) mismatches += 1.0;
            }
        }
    }
    out.checks.push_back(check_eq("martingale mismatches through length 12", mismatches, 0.0, 0.0));

    const bool pins = num_encode(3) == "10" && pad_encode(5, 6) == "000100" &&
                      double_encode("101") == "110011";
    out.checks.push_back(check_eq("numeral pins", pins ? 1.0 : 0.0, 1.0, 0.0));
    settle(out);
    return out;
}

using CriterionFn = CriterionOutcome (*)(Suite, std::uint64_t, const SimLimits&);

struct CriterionEntry {
    const char* id;
    CriterionFn fn;
};

constexpr CriterionEntry kCriteria[] = {
    {"cloning", crit_cloning},
    {"moe", crit_moe},
    {"wrappers", crit_wrappers},
    {"diagonalization", crit_diagonalization},
    {"search-lift", crit_search_lift},
    {"goldreich-levin", crit_goldreich_levin},
    {"promise", crit_promise},
    {"language", crit_language},
    {"copy-protection", crit_copy_protection},
    {"mlr", crit_mlr},
};

}  // namespace

const std::vector<std::string>& criterion_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const CriterionEntry& e : kCriteria) v.emplace_back(e.id);
        return v;
    }();
    return ids;
}

CriterionOutcome run_criterion(const std::string& id, Suite suite, std::uint64_t seed,
                               const SimLimits& limits) {
    for (const CriterionEntry& e : kCriteria) {
        if (id == e.id) {
            const auto start = std::chrono::steady_clock::now();
            CriterionOutcome out = e.fn(suite, seed, limits);
            out.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return out;
        }
    }
    throw std::invalid_argument("run_criterion: unknown criterion id '" + id + "'");
}

BatteryReport run_battery(Suite suite, std::uint64_t seed,
                          const std::optional<std::string>& inject_failure,
                          const SimLimits& limits) {
    if (inject_failure) {
        const auto& ids = criterion_ids();
        if (std::find(ids.begin(), ids.end(), *inject_failure) == ids.end())
            throw std::invalid_argument("run_battery: unknown criterion id '" + *inject_failure +
                                        "'");
    }
    const auto start = std::chrono::steady_clock::now();
    BatteryReport report;
    report.suite = suite;
    report.seed = seed;
    for (const CriterionEntry& e : kCriteria) {
        CriterionOutcome out = run_criterion(e.id, suite, seed, limits);
        if (inject_failure && *inject_failure == out.id) {
            out.pass = false;
            out.checks.push_back({"injected failure (reporting self-test)", "==", 0.0, 1.0, 0.0,
                                  false});
        }
        report.criteria.push_back(std::move(out));
    }
    report.all_pass = true;
    for (const CriterionOutcome& c : report.criteria) report.all_pass = report.all_pass && c.pass;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

nlohmann::json criterion_to_json(const CriterionOutcome& c, bool include_timings) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckLine& line : c.checks) {
        checks.push_back({{"name", line.name},
                          {"relation", line.relation},
                          {"measured", line.measured},
                          {"expected", line.expected},
                          {"tolerance", line.tolerance},
                          {"pass", line.pass}});
    }
    nlohmann::json j{
        {"id", c.id}, {"statement", c.statement}, {"checks", checks}, {"pass", c.pass}};
    if (include_timings) j["wall_seconds"] = c.wall_seconds;
    return j;
}

nlohmann::json battery_to_json(const BatteryReport& r, bool include_timings) {
    nlohmann::json criteria = nlohmann::json::array();
    for (const CriterionOutcome& c : r.criteria)
        criteria.push_back(criterion_to_json(c, include_timings));
    nlohmann::json j{{"schema", "quclone/1"},
                     {"suite", r.suite == Suite::full ? "full" : "smoke"},
                     {"seed", r.seed},
                     {"criteria", criteria},
                     {"all_pass", r.all_pass}};
    if (include_timings) j["wall_seconds"] = r.wall_seconds;
    return j;
}

std::string format_criterion_line(const CriterionOutcome& c) {
    std::size_t passed = 0;
    for (const CheckLine& line : c.checks) passed += line.pass ? 1 : 0;
    std::string s = c.pass ? "PASS " : "FAIL ";
    s += c.id;
    if (c.id.size() < 16) s += std::string(16 - c.id.size(), ' ');
    s += " " + std::to_string(passed) + "/" + std::to_string(c.checks.size()) + " checks";
    if (!c.pass) {
        for (const CheckLine& line : c.checks)
            if (!line.pass)
                s += "\n      failed: " + line.name + " (" + std::to_string(line.measured) + " " +
                     line.relation + " " + std::to_string(line.expected) + " tol " +
                     std::to_string(line.tolerance) + ")";
    }
    return s;
}

}  // namespace quclone
