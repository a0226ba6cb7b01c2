#include "quclone/compile.hpp"

namespace quclone {

namespace {
void append_t_power(Circuit& c, int target, int k) {
    for (int i = 0; i < k; ++i) c.then(g_t(target));
}
}  // namespace

void append_controlled_h(Circuit& c, int control, int target) {
    // V^dag = T^7 H T^6 as an operator product; rightmost factor acts first.
    append_t_power(c, target, 6);
    c.then(g_h(target));
    append_t_power(c, target, 7);
    c.then(g_cnot(control, target));
    // V = T^2 H T
    c.then(g_t(target));
    c.then(g_h(target));
    append_t_power(c, target, 2);
}

void append_ry45(Circuit& c, int target) {
    // T^2 (H T H) T^6, rightmost first
    append_t_power(c, target, 6);
    c.then(g_h(target));
    c.then(g_t(target));
    c.then(g_h(target));
    append_t_power(c, target, 2);
}

void append_ry45_inv(Circuit& c, int target) {
    // T^2 (H T^7 H) T^6
    append_t_power(c, target, 6);
    c.then(g_h(target));
    append_t_power(c, target, 7);
    c.then(g_h(target));
    append_t_power(c, target, 2);
}

int append_and_chain(Circuit& c, const std::vector<int>& inputs, int live_wires) {
    int w = live_wires;
    if (inputs.empty()) {
        c.then(g_prep()).then(g_x(w));
        return w;
    }
    if (inputs.size() == 1) {
        c.then(g_prep()).then(g_cnot(inputs[0], w));
        return w;
    }
    int acc = -1;
    for (std::size_t i = 1; i < inputs.size(); ++i) {
        c.then(g_prep());
        const int fresh = w++;
        if (i == 1)
            c.then(g_tof(inputs[0], inputs[1], fresh));
        else
            c.then(g_tof(acc, inputs[i], fresh));
        acc = fresh;
    }
    return acc;
}

Circuit inverse_unitary(const Circuit& c) {
    if (!c.unitary_only()) throw std::invalid_argument("inverse_unitary: circuit has prep/trace");
    c.validate();
    Circuit out;
    out.input_wires = c.input_wires;
    for (auto layer = c.layers.rbegin(); layer != c.layers.rend(); ++layer) {
        std::vector<Gate> inv_layer;
        bool has_t = false;
        for (const Gate& g : *layer)
            if (g.kind == GateKind::PhaseShift) has_t = true;
        if (!has_t) {
            out.layers.push_back(*layer);  // all involutions
            continue;
        }
        // Split: involutions stay one layer; each T becomes seven sequential Ts.
        std::vector<Gate> invol;
        std::vector<int> t_targets;
        for (const Gate& g : *layer) {
            if (g.kind == GateKind::PhaseShift)
                t_targets.push_back(g.wires[0]);
            else
                invol.push_back(g);
        }
        if (!invol.empty()) out.layers.push_back(invol);
        for (int i = 0; i < 7; ++i) {
            std::vector<Gate> tl;
            for (int t : t_targets) tl.push_back(g_t(t));
            out.layers.push_back(tl);
        }
    }
    return out;
}

}  // namespace quclone
