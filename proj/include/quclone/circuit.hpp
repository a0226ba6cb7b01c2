#pragma once
// Circuits are layered gate lists over a declared number of input wires.
//
// Layer semantics: within one layer every explicit wire target must be
// distinct.  Unitaries of the layer act first (disjointness makes the order
// irrelevant), then TraceOuts remove their targets (indices as at layer
// entry), then PrepZeros append fresh |0> wires at the end.  Wire indices
// compact downward after removals, so gates in *later* layers see the updated
// numbering.  The output wire count is whatever survives the last layer.
//
// TraceOut mid-circuit is first-class: the simulator drops to density-matrix
// form when a trace happens before the end, and stays on the statevector path
// when every trace sits in a terminal suffix.

#include <cstdint>

#include "quclone/gates.hpp"
#include "quclone/states.hpp"

namespace quclone {

struct Circuit {
    int input_wires = 0;
    std::vector<std::vector<Gate>> layers;

    bool operator==(const Circuit&) const = default;

    // Sequential builder: appends a singleton layer.
    Circuit& then(const Gate& g) {
        layers.push_back({g});
        return *this;
    }
    // Appends a parallel layer.
    Circuit& layer(std::vector<Gate> gs) {
        layers.push_back(std::move(gs));
        return *this;
    }

    // Walks the wire bookkeeping; throws std::invalid_argument if any layer is
    // malformed (bad arity, duplicate or out-of-range targets).
    void validate() const;

    int output_wires() const;  // validates, then reports the surviving count
    int peak_wires() const;    // high-water mark, counting macro ancillas

    bool unitary_only() const;  // no PrepZero / TraceOut / macros with them
};

// The canonical (0,0)-circuit every invalid description decodes to.
inline Circuit empty_circuit() { return Circuit{}; }

// Rewrites macros into primitive gates (PauliX -> H T^4 H, PauliZ -> T^4,
// CNOT -> prepared-and-traced |1> ancilla driving a Toffoli).  Multi-gate
// layers containing macros are split into sequential sub-layers.
Circuit expand_macros(const Circuit& c);

// Primitive gate count after macro expansion.  Every primitive record counts
// 1, including PrepZero and TraceOut.
std::uint64_t gate_cost(const Circuit& c);

// --- simulation ----------------------------------------------------------------

// Applies the circuit to a density input.  Input wire count must match.
DensityState apply_circuit(const Circuit& c, const DensityState& in,
                           const SimLimits& limits = default_limits());

// Linear extension to arbitrary (not necessarily PSD / normalized) matrices;
// used to build Choi matrices.  No state validation.
Mat apply_circuit_raw(const Circuit& c, const Mat& in,
                      const SimLimits& limits = default_limits());

// Probabilities of all 2^b computational outcomes given a basis-state input.
std::vector<double> output_distribution(const Circuit& c, const Bits& input,
                                        const SimLimits& limits = default_limits());
std::vector<double> output_distribution(const Circuit& c, const DensityState& in,
                                        const SimLimits& limits = default_limits());

// <outcome| C(|input><input|) |outcome>.
double outcome_probability(const Circuit& c, const Bits& input, const Bits& outcome,
                           const SimLimits& limits = default_limits());

}  // namespace quclone
