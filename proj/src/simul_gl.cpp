#include "quclone/simul_gl.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace quclone {

namespace {

int total_wires(const InnerProductGuesser& g) {
    return g.ell + g.side_wires + g.ancillas;
}

// Relabels every gate of a dilation into the transform's layout:
// challenge wires move behind the side-info block, work wires shift up
// by the same amount.
Circuit relabel_for_transform(const Circuit& c, int ell, int side) {
    Circuit out;
    out.input_wires = c.input_wires;
    for (const auto& layer : c.layers) {
        std::vector<Gate> mapped;
        mapped.reserve(layer.size());
        for (const Gate& g : layer) {
            Gate m = g;
            for (int& w : m.wires) w = w < ell ? side + w : (w < ell + side ? w - ell : w);
            mapped.push_back(std::move(m));
        }
        out.layers.push_back(std::move(mapped));
    }
    return out;
}

int map_wire(int w, int ell, int side) {
    return w < ell ? side + w : (w < ell + side ? w - ell : w);
}

}  // namespace

void InnerProductGuesser::validate() const {
    if (ell < 0 || side_wires < 0 || ancillas < 0)
        throw std::invalid_argument("InnerProductGuesser: negative register width");
    if (unitary.input_wires != total_wires(*this))
        throw std::invalid_argument("InnerProductGuesser: dilation width mismatch");
    if (!unitary.unitary_only())
        throw std::invalid_argument("InnerProductGuesser: dilation must be unitary gates only");
    unitary.validate();
    if (output_wire < 0 || output_wire >= total_wires(*this))
        throw std::invalid_argument("InnerProductGuesser: output wire out of range");
}

ChoiChannel InnerProductGuesser::guess_channel(const SimLimits& limits) const {
    validate();
    Circuit c;
    c.input_wires = ell + side_wires;
    for (int i = 0; i < ancillas; ++i) c.then(g_prep());
    for (const auto& layer : unitary.layers) c.layers.push_back(layer);
    const int total = total_wires(*this);
    for (int w = total - 1; w > output_wire; --w) c.then(g_trace(w));
    for (int w = output_wire - 1; w >= 0; --w) c.then(g_trace(w));
    return circuit_choi(c, limits);
}

InnerProductGuesser dilate_guesser(const Circuit& guess, int ell, int output_wire) {
    int preps = 0;
    Circuit stripped;
    stripped.input_wires = guess.input_wires;
    for (const auto& layer : guess.layers) {
        std::vector<Gate> kept;
        for (const Gate& g : layer) {
            if (g.kind == GateKind::PrepZero) {
                ++preps;
                continue;
            }
            if (g.kind == GateKind::TraceOut)
                throw std::invalid_argument(
                    "dilate_guesser: trace gates cannot run coherently");
            kept.push_back(g);
        }
        if (!kept.empty()) stripped.layers.push_back(std::move(kept));
    }
    InnerProductGuesser g;
    g.ell = ell;
    g.side_wires = guess.input_wires - ell;
    g.ancillas = preps;
    stripped.input_wires = guess.input_wires + preps;
    g.unitary = std::move(stripped);
    g.output_wire = output_wire;
    g.validate();
    return g;
}

Circuit gl_transform(const InnerProductGuesser& g, const SimLimits& limits) {
    g.validate();
    const int b = g.side_wires;
    const int total = b + g.ell + g.ancillas + 1;
    if (total > limits.max_statevector_wires)
        throw resource_error("gl_transform: dilation exceeds the wire cap");

    Circuit t;
    t.input_wires = b;  // side info comes in; challenge register is internal
    for (int i = 0; i < g.ell + g.ancillas + 1; ++i) t.then(g_prep());
    const int y0 = b;
    const int target = b + g.ell + g.ancillas;

    for (int i = 0; i < g.ell; ++i) t.then(g_h(y0 + i));
    t.then(g_x(target)).then(g_h(target));

    const Circuit fwd = relabel_for_transform(g.unitary, g.ell, b);
    for (const auto& layer : fwd.layers) t.layers.push_back(layer);
    t.then(g_cnot(map_wire(g.output_wire, g.ell, b), target));
    const Circuit bwd = relabel_for_transform(inverse_unitary(g.unitary), g.ell, b);
    for (const auto& layer : bwd.layers) t.layers.push_back(layer);

    for (int i = 0; i < g.ell; ++i) t.then(g_h(y0 + i));
    t.then(g_trace(target));
    for (int w = b + g.ell + g.ancillas - 1; w >= b + g.ell; --w) t.then(g_trace(w));
    for (int w = b - 1; w >= 0; --w) t.then(g_trace(w));
    return t;
}

void GLHarnessCase::validate() const {
    if (ell < 0 || b_wires < 0 || c_wires < 0)
        throw std::invalid_argument("GLHarnessCase: negative width");
    if (entries.empty()) throw std::invalid_argument("GLHarnessCase: no entries");
    double total = 0;
    for (const GLCaseEntry& e : entries) {
        if (static_cast<int>(e.x_b.size()) != ell || static_cast<int>(e.x_c.size()) != ell)
            throw std::invalid_argument("GLHarnessCase: string length mismatch");
        require_bits(e.x_b, "GLHarnessCase");
        require_bits(e.x_c, "GLHarnessCase");
        if (e.weight < 0) throw std::invalid_argument("GLHarnessCase: negative weight");
        if (e.joint.wires() != b_wires + c_wires)
            throw std::invalid_argument("GLHarnessCase: joint state width mismatch");
        total += e.weight;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("GLHarnessCase: weights must sum to 1");
}

GLHarnessCase classical_point_case(const Bits& x_b, const Bits& x_c) {
    GLHarnessCase c;
    c.ell = static_cast<int>(x_b.size());
    c.b_wires = c.ell;
    c.c_wires = static_cast<int>(x_c.size());
    c.entries.push_back({x_b, x_c, 1.0, DensityState::basis(x_b + x_c)});
    c.validate();
    return c;
}

namespace {

int dot_mod2(const Bits& x, const Bits& y) {
    int acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc ^= (x[i] == '1' && y[i] == '1') ? 1 : 0;
    return acc;
}

double ip_term(const GLCaseEntry& e, const Bits& y_b, const Bits& y_c, int ell, int b_wires,
               int c_wires, const ChoiChannel& bob_ch, const ChoiChannel& charlie_ch) {
    const Vec yb = PureState::basis(y_b).amplitudes();
    const Vec yc = PureState::basis(y_c).amplitudes();
    Mat state = kron(kron(Mat(yb * yb.adjoint()), e.joint.matrix()), Mat(yc * yc.adjoint()));
    state = channel_apply_prefix(bob_ch, state, ell + b_wires + c_wires + ell);
    // layout now [bob's bit | charlie share | y_C]; the guesser wants
    // its challenge first
    std::vector<int> targets;
    for (int i = 0; i < ell; ++i) targets.push_back(1 + c_wires + i);
    for (int i = 0; i < c_wires; ++i) targets.push_back(1 + i);
    state = channel_apply_to(charlie_ch, state, 1 + c_wires + ell, targets);
    const int beta = dot_mod2(e.x_b, y_b);
    const int gamma = dot_mod2(e.x_c, y_c);
    return state(gamma * 2 + beta, gamma * 2 + beta).real();
}

}  // namespace

double measure_ip_advantage(const GLHarnessCase& c, const InnerProductGuesser& bob,
                            const InnerProductGuesser& charlie, const SimLimits& limits) {
    c.validate();
    if (bob.ell != c.ell || bob.side_wires != c.b_wires)
        throw std::invalid_argument("measure_ip_advantage: first guesser shape mismatch");
    if (charlie.ell != c.ell || charlie.side_wires != c.c_wires)
        throw std::invalid_argument("measure_ip_advantage: second guesser shape mismatch");
    if (c.ell + c.b_wires + c.c_wires + c.ell > limits.max_density_wires)
        throw resource_error("measure_ip_advantage: joint state exceeds the wire cap");
    const ChoiChannel bob_ch = bob.guess_channel(limits);
    const ChoiChannel charlie_ch = charlie.guess_channel(limits);
    const std::uint64_t side = std::uint64_t{1} << c.ell;
    double acc = 0;
    for (const GLCaseEntry& e : c.entries) {
        double inner = 0;
        for (std::uint64_t yb = 0; yb < side; ++yb)
            for (std::uint64_t yc = 0; yc < side; ++yc)
                inner += ip_term(e, index_to_bits(yb, c.ell), index_to_bits(yc, c.ell), c.ell,
                                 c.b_wires, c.c_wires, bob_ch, charlie_ch);
        acc += e.weight * inner / static_cast<double>(side * side);
    }
    return acc - 0.5;
}

GLEstimate measure_ip_advantage_mc(const GLHarnessCase& c, const InnerProductGuesser& bob,
                                   const InnerProductGuesser& charlie, std::uint64_t seed,
                                   std::uint64_t samples, const SimLimits& limits) {
    c.validate();
    const ChoiChannel bob_ch = bob.guess_channel(limits);
    const ChoiChannel charlie_ch = charlie.guess_channel(limits);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const std::uint64_t side = std::uint64_t{1} << c.ell;
    std::map<std::tuple<std::size_t, std::uint64_t, std::uint64_t>, double> cache;
    double sum = 0, sumsq = 0;
    for (std::uint64_t trial = 0; trial < samples; ++trial) {
        double pick = coin(rng);
        std::size_t idx = 0;
        while (idx + 1 < c.entries.size() && pick > c.entries[idx].weight) {
            pick -= c.entries[idx].weight;
            ++idx;
        }
        const std::uint64_t yb = std::uniform_int_distribution<std::uint64_t>(0, side - 1)(rng);
        const std::uint64_t yc = std::uniform_int_distribution<std::uint64_t>(0, side - 1)(rng);
        auto it = cache.find({idx, yb, yc});
        if (it == cache.end())
            it = cache
                     .emplace(std::make_tuple(idx, yb, yc),
                              ip_term(c.entries[idx], index_to_bits(yb, c.ell),
                                      index_to_bits(yc, c.ell), c.ell, c.b_wires, c.c_wires,
                                      bob_ch, charlie_ch))
                     .first;
        sum += it->second;
        sumsq += it->second * it->second;
    }
    GLEstimate est;
    est.seed = seed;
    est.samples = samples;
    const double mean = sum / static_cast<double>(samples);
    est.value = mean - 0.5;
    const double var = std::max(0.0, sumsq / static_cast<double>(samples) - mean * mean);
    est.std_error = std::sqrt(var / static_cast<double>(samples));
    return est;
}

double measure_string_success(const GLHarnessCase& c, const Circuit& bob, const Circuit& charlie,
                              const SimLimits& limits) {
    c.validate();
    if (bob.input_wires != c.b_wires || bob.output_wires() != c.ell)
        throw std::invalid_argument("measure_string_success: first guesser shape mismatch");
    if (charlie.input_wires != c.c_wires || charlie.output_wires() != c.ell)
        throw std::invalid_argument("measure_string_success: second guesser shape mismatch");
    const ChoiChannel bob_ch = circuit_choi(bob, limits);
    const ChoiChannel charlie_ch = circuit_choi(charlie, limits);
    double acc = 0;
    for (const GLCaseEntry& e : c.entries) {
        Mat state = channel_apply_prefix(bob_ch, e.joint.matrix(), c.b_wires + c.c_wires);
        std::vector<int> targets;
        for (int i = 0; i < c.c_wires; ++i) targets.push_back(c.ell + i);
        state = channel_apply_to(charlie_ch, state, c.ell + c.c_wires, targets);
        const std::uint64_t idx =
            (bits_to_index(e.x_c) << c.ell) | bits_to_index(e.x_b);
        acc += e.weight * state(static_cast<std::int64_t>(idx), static_cast<std::int64_t>(idx))
                              .real();
    }
    return acc;
}

InnerProductGuesser parity_guesser(int ell) {
    InnerProductGuesser g;
    g.ell = ell;
    g.side_wires = ell;
    g.ancillas = 1;
    g.output_wire = 2 * ell;
    g.unitary.input_wires = 2 * ell + 1;
    for (int i = 0; i < ell; ++i) g.unitary.then(g_tof(i, ell + i, 2 * ell));
    g.validate();
    return g;
}

InnerProductGuesser constant_zero_guesser(int ell) {
    InnerProductGuesser g;
    g.ell = ell;
    g.side_wires = ell;
    g.ancillas = 1;
    g.output_wire = 2 * ell;
    g.unitary.input_wires = 2 * ell + 1;
    g.validate();
    return g;
}

InnerProductGuesser noisy_parity_guesser(int ell) {
    InnerProductGuesser g = parity_guesser(ell);
    g.ancillas = 3;
    g.unitary.input_wires = 2 * ell + 3;
    g.unitary.then(g_h(2 * ell + 1)).then(g_h(2 * ell + 2));
    g.unitary.then(g_tof(2 * ell + 1, 2 * ell + 2, 2 * ell));
    g.validate();
    return g;
}

InnerProductGuesser skewed_noisy_parity_guesser(int ell) {
    if (ell < 1)
        throw std::invalid_argument("skewed_noisy_parity_guesser: needs a challenge bit");
    InnerProductGuesser g = parity_guesser(ell);
    g.ancillas = 4;
    g.unitary.input_wires = 2 * ell + 4;
    const int a1 = 2 * ell + 1, a2 = 2 * ell + 2, w = 2 * ell + 3;
    g.unitary.then(g_h(a1)).then(g_h(a2));
    g.unitary.then(g_tof(a1, a2, w));
    g.unitary.then(g_tof(0, w, 2 * ell));
    g.validate();
    return g;
}

Circuit random_string_guesser(int side, int ell) {
    Circuit c;
    c.input_wires = side;
    for (int w = side - 1; w >= 0; --w) c.then(g_trace(w));
    for (int i = 0; i < ell; ++i) c.then(g_prep());
    for (int i = 0; i < ell; ++i) c.then(g_h(i));
    return c;
}

KTCheck kt_check(const GLHarnessCase& c, const InnerProductGuesser& bob,
                 const InnerProductGuesser& charlie, const SimLimits& limits) {
    KTCheck k;
    k.advantage = measure_ip_advantage(c, bob, charlie, limits);
    k.transformed_success =
        measure_string_success(c, gl_transform(bob, limits), gl_transform(charlie, limits),
                               limits);
    const double delta = std::max(k.advantage, 0.0);
    k.kt_floor = delta * delta * delta / 2.0;
    k.holds = k.transformed_success >= k.kt_floor - 1e-9;
    return k;
}

nlohmann::json kt_check_to_json(const KTCheck& k) {
    return {{"advantage", k.advantage},
            {"transformed_success", k.transformed_success},
            {"kt_floor", k.kt_floor},
            {"holds", k.holds}};
}

}  // namespace quclone
