#include "quclone/circuit.hpp"

#include <algorithm>

namespace quclone {

namespace {

struct LayerSplit {
    std::vector<const Gate*> unitaries;
    std::vector<int> traces;
    int preps = 0;
};

// Validates one layer against the current width and splits it by role.
LayerSplit split_layer(const std::vector<Gate>& layer, int w) {
    LayerSplit out;
    std::vector<bool> used(static_cast<std::size_t>(w), false);
    for (const Gate& g : layer) {
        if (static_cast<int>(g.wires.size()) != gate_arity(g.kind))
            throw std::invalid_argument("circuit: gate arity mismatch");
        for (int t : g.wires) {
            if (t < 0 || t >= w) throw std::invalid_argument("circuit: wire out of range");
            if (used[static_cast<std::size_t>(t)])
                throw std::invalid_argument("circuit: wire used twice in one layer");
            used[static_cast<std::size_t>(t)] = true;
        }
        if (g.kind == GateKind::PrepZero)
            ++out.preps;
        else if (g.kind == GateKind::TraceOut)
            out.traces.push_back(g.wires[0]);
        else
            out.unitaries.push_back(&g);
    }
    return out;
}

void check_density_caps(int w, const SimLimits& lim) {
    if (w > lim.max_density_wires)
        throw resource_error("density simulation exceeds wire cap");
    const std::size_t bytes = (std::size_t{1} << (2 * w)) * sizeof(cplx);
    if (bytes > (lim.max_megabytes << 20))
        throw resource_error("density simulation exceeds memory cap");
}

void check_sv_caps(int w, const SimLimits& lim) {
    if (w > lim.max_statevector_wires)
        throw resource_error("statevector simulation exceeds wire cap");
    const std::size_t bytes = (std::size_t{1} << w) * sizeof(cplx);
    if (bytes > (lim.max_megabytes << 20))
        throw resource_error("statevector simulation exceeds memory cap");
}

// Index offsets for a k-wire gate on targets tg within width w.
struct TargetMap {
    Eigen::Index union_mask = 0;
    std::vector<Eigen::Index> offset;  // local gate index -> index bits

    TargetMap(int w, const std::vector<int>& tg) {
        const int k = static_cast<int>(tg.size());
        std::vector<Eigen::Index> bit(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            bit[static_cast<std::size_t>(i)] = Eigen::Index(1) << (w - 1 - tg[static_cast<std::size_t>(i)]);
            union_mask |= bit[static_cast<std::size_t>(i)];
        }
        offset.resize(std::size_t{1} << k);
        for (Eigen::Index j = 0; j < (Eigen::Index(1) << k); ++j) {
            Eigen::Index off = 0;
            for (int i = 0; i < k; ++i)
                if ((j >> (k - 1 - i)) & 1) off |= bit[static_cast<std::size_t>(i)];
            offset[static_cast<std::size_t>(j)] = off;
        }
    }
};

void sv_apply_unitary(Vec& amp, int w, const Mat& u, const std::vector<int>& tg) {
    const TargetMap tm(w, tg);
    const Eigen::Index kd = static_cast<Eigen::Index>(tm.offset.size());
    Vec sub(kd), res(kd);
    for (Eigen::Index base = 0; base < amp.size(); ++base) {
        if (base & tm.union_mask) continue;
        for (Eigen::Index j = 0; j < kd; ++j) sub(j) = amp(base | tm.offset[static_cast<std::size_t>(j)]);
        res.noalias() = u * sub;
        for (Eigen::Index j = 0; j < kd; ++j) amp(base | tm.offset[static_cast<std::size_t>(j)]) = res(j);
    }
}

// rho -> U rho U^dag with U acting on the given targets.
void dm_apply_unitary(Mat& rho, int w, const Mat& u, const std::vector<int>& tg) {
    const TargetMap tm(w, tg);
    const Eigen::Index kd = static_cast<Eigen::Index>(tm.offset.size());
    const Eigen::Index dim = rho.rows();
    Vec sub(kd), res(kd);
    const Mat uc = u.conjugate();
    // left multiply: column by column over the row index
    for (Eigen::Index col = 0; col < dim; ++col) {
        for (Eigen::Index base = 0; base < dim; ++base) {
            if (base & tm.union_mask) continue;
            for (Eigen::Index j = 0; j < kd; ++j) sub(j) = rho(base | tm.offset[static_cast<std::size_t>(j)], col);
            res.noalias() = u * sub;
            for (Eigen::Index j = 0; j < kd; ++j) rho(base | tm.offset[static_cast<std::size_t>(j)], col) = res(j);
        }
    }
    // right multiply by U^dag: row by row over the column index
    for (Eigen::Index row = 0; row < dim; ++row) {
        for (Eigen::Index base = 0; base < dim; ++base) {
            if (base & tm.union_mask) continue;
            for (Eigen::Index j = 0; j < kd; ++j) sub(j) = rho(row, base | tm.offset[static_cast<std::size_t>(j)]);
            res.noalias() = uc * sub;
            for (Eigen::Index j = 0; j < kd; ++j) rho(row, base | tm.offset[static_cast<std::size_t>(j)]) = res(j);
        }
    }
}

// Finds the layer index where a terminal trace/prep-only suffix begins, or -1
// if some TraceOut is followed by later unitaries (forcing the density path).
int terminal_suffix_start(const Circuit& c) {
    int first_trace = -1;
    for (std::size_t li = 0; li < c.layers.size(); ++li) {
        bool has_trace = false;
        for (const Gate& g : c.layers[li])
            if (g.kind == GateKind::TraceOut) has_trace = true;
        if (has_trace) {
            first_trace = static_cast<int>(li);
            break;
        }
    }
    if (first_trace < 0) return static_cast<int>(c.layers.size());
    // Every gate from the suffix start onward must be structural.  The first
    // suffix layer may still hold unitaries (they act before its traces).
    for (std::size_t li = static_cast<std::size_t>(first_trace); li < c.layers.size(); ++li) {
        for (const Gate& g : c.layers[li]) {
            bool structural = g.kind == GateKind::TraceOut || g.kind == GateKind::PrepZero;
            if (li == static_cast<std::size_t>(first_trace) && g.kind != GateKind::PrepZero) continue;
            if (!structural) return -1;
        }
    }
    return first_trace;
}

// Marginalizes wire q out of a probability vector over w wires.
std::vector<double> marginalize_wire(const std::vector<double>& p, int w, int q) {
    const std::size_t hd = std::size_t{1} << (w - 1);
    const int bit = w - 1 - q;
    std::vector<double> out(hd, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const std::size_t low = i & ((std::size_t{1} << bit) - 1);
        const std::size_t high = (i >> (bit + 1)) << bit;
        out[high | low] += p[i];
    }
    return out;
}

}  // namespace

void Circuit::validate() const {
    if (input_wires < 0) throw std::invalid_argument("circuit: negative input wire count");
    int w = input_wires;
    for (const auto& layer : layers) {
        if (layer.empty()) throw std::invalid_argument("circuit: empty layer");
        LayerSplit s = split_layer(layer, w);
        w += s.preps - static_cast<int>(s.traces.size());
    }
}

int Circuit::output_wires() const {
    validate();
    int w = input_wires;
    for (const auto& layer : layers) {
        LayerSplit s = split_layer(layer, w);
        w += s.preps - static_cast<int>(s.traces.size());
    }
    return w;
}

int Circuit::peak_wires() const {
    const Circuit ex = expand_macros(*this);
    int w = ex.input_wires, peak = ex.input_wires;
    for (const auto& layer : ex.layers) {
        LayerSplit s = split_layer(layer, w);
        w += s.preps - static_cast<int>(s.traces.size());
        peak = std::max(peak, std::max(w, w + static_cast<int>(s.traces.size())));
    }
    return peak;
}

bool Circuit::unitary_only() const {
    for (const auto& layer : layers)
        for (const Gate& g : layer)
            if (!is_unitary(g.kind)) return false;
    return true;
}

Circuit expand_macros(const Circuit& c) {
    c.validate();
    Circuit out;
    out.input_wires = c.input_wires;
    int w = c.input_wires;
    for (const auto& layer : c.layers) {
        LayerSplit s = split_layer(layer, w);
        std::vector<Gate> plain;
        std::vector<const Gate*> macros;
        for (const Gate* g : s.unitaries) {
            if (is_macro(g->kind))
                macros.push_back(g);
            else
                plain.push_back(*g);
        }
        if (!plain.empty()) out.layers.push_back(plain);
        for (const Gate* g : macros) {
            switch (g->kind) {
                case GateKind::PauliX: {
                    const int t = g->wires[0];
                    out.then(g_h(t)).then(g_t(t)).then(g_t(t)).then(g_t(t)).then(g_t(t)).then(g_h(t));
                    break;
                }
                case GateKind::PauliZ: {
                    const int t = g->wires[0];
                    out.then(g_t(t)).then(g_t(t)).then(g_t(t)).then(g_t(t));
                    break;
                }
                case GateKind::CNOT: {
                    // Toffoli against an ancilla driven |0> -> |1> by X = H T^4 H.
                    const int a = w;  // appended position
                    out.then(g_prep());
                    out.then(g_h(a)).then(g_t(a)).then(g_t(a)).then(g_t(a)).then(g_t(a)).then(g_h(a));
                    out.then(g_tof(g->wires[0], a, g->wires[1]));
                    out.then(g_trace(a));
                    break;
                }
                default:
                    throw std::logic_error("expand_macros: unexpected kind");
            }
        }
        if (!s.traces.empty()) {
            std::vector<Gate> tl;
            for (int t : s.traces) tl.push_back(g_trace(t));
            out.layers.push_back(tl);
        }
        if (s.preps > 0) {
            std::vector<Gate> pl(static_cast<std::size_t>(s.preps), g_prep());
            out.layers.push_back(pl);
        }
        w += s.preps - static_cast<int>(s.traces.size());
    }
    return out;
}

std::uint64_t gate_cost(const Circuit& c) {
    const Circuit ex = expand_macros(c);
    std::uint64_t n = 0;
    for (const auto& layer : ex.layers) n += layer.size();
    return n;
}

DensityState apply_circuit(const Circuit& c, const DensityState& in, const SimLimits& limits) {
    c.validate();
    if (in.wires() != c.input_wires)
        throw std::invalid_argument("apply_circuit: input wire count mismatch");
    Mat rho = apply_circuit_raw(c, in.matrix(), limits);
    return DensityState(c.output_wires(), std::move(rho));
}

Mat apply_circuit_raw(const Circuit& c, const Mat& in, const SimLimits& limits) {
    c.validate();
    const Eigen::Index d = Eigen::Index(1) << c.input_wires;
    if (in.rows() != d || in.cols() != d)
        throw std::invalid_argument("apply_circuit_raw: input dimension mismatch");
    int w = c.input_wires;
    check_density_caps(w, limits);
    Mat rho = in;
    Mat e0 = Mat::Zero(2, 2);
    e0(0, 0) = 1.0;
    for (const auto& layer : c.layers) {
        LayerSplit s = split_layer(layer, w);
        for (const Gate* g : s.unitaries) dm_apply_unitary(rho, w, gate_matrix(g->kind), g->wires);
        std::vector<int> tr = s.traces;
        std::sort(tr.rbegin(), tr.rend());
        for (int q : tr) {
            rho = partial_trace_qubits(rho, w, {q});
            --w;
        }
        for (int i = 0; i < s.preps; ++i) {
            check_density_caps(w + 1, limits);
            rho = kron(rho, e0);
            ++w;
        }
    }
    return rho;
}

std::vector<double> output_distribution(const Circuit& c, const Bits& input, const SimLimits& limits) {
    c.validate();
    require_bits(input, "output_distribution input");
    if (static_cast<int>(input.size()) != c.input_wires)
        throw std::invalid_argument("output_distribution: input length mismatch");

    const int suffix = terminal_suffix_start(c);
    if (suffix < 0) {
        // Mid-circuit trace followed by more work: density path.
        return output_distribution(c, DensityState::basis(input), limits);
    }

    // Statevector prefix.
    int w = c.input_wires;
    check_sv_caps(w, limits);
    Vec amp = PureState::basis(input).amplitudes();
    Vec e0(2);
    e0 << 1.0, 0.0;
    for (int li = 0; li < suffix; ++li) {
        LayerSplit s = split_layer(c.layers[static_cast<std::size_t>(li)], w);
        for (const Gate* g : s.unitaries) sv_apply_unitary(amp, w, gate_matrix(g->kind), g->wires);
        for (int i = 0; i < s.preps; ++i) {
            check_sv_caps(w + 1, limits);
            amp = kron(amp, e0);
            ++w;
        }
    }

    // Structural suffix acts on probabilities only.
    std::vector<double> p(static_cast<std::size_t>(amp.size()));
    for (Eigen::Index i = 0; i < amp.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(amp(i));
    for (std::size_t li = static_cast<std::size_t>(suffix); li < c.layers.size(); ++li) {
        LayerSplit s = split_layer(c.layers[li], w);
        for (const Gate* g : s.unitaries) sv_apply_unitary(amp, w, gate_matrix(g->kind), g->wires);
        if (!s.unitaries.empty()) {
            // unitaries in the first suffix layer precede its traces
            for (Eigen::Index i = 0; i < amp.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(amp(i));
        }
        std::vector<int> tr = s.traces;
        std::sort(tr.rbegin(), tr.rend());
        for (int q : tr) {
            p = marginalize_wire(p, w, q);
            --w;
        }
        for (int i = 0; i < s.preps; ++i) {
            std::vector<double> q2(p.size() * 2, 0.0);
            for (std::size_t i2 = 0; i2 < p.size(); ++i2) q2[i2 * 2] = p[i2];
            p.swap(q2);
            ++w;
        }
    }
    return p;
}

std::vector<double> output_distribution(const Circuit& c, const DensityState& in, const SimLimits& limits) {
    DensityState out = apply_circuit(c, in, limits);
    std::vector<double> p(static_cast<std::size_t>(out.dim()));
    for (Eigen::Index i = 0; i < out.dim(); ++i) p[static_cast<std::size_t>(i)] = out.matrix()(i, i).real();
    return p;
}

double outcome_probability(const Circuit& c, const Bits& input, const Bits& outcome, const SimLimits& limits) {
    require_bits(outcome, "outcome_probability outcome");
    if (static_cast<int>(outcome.size()) != c.output_wires())
        throw std::invalid_argument("outcome_probability: outcome length mismatch");
    const std::vector<double> p = output_distribution(c, input, limits);
    return p[bits_to_index(outcome)];
}

}  // namespace quclone
