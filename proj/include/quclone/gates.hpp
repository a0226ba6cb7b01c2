#pragma once
// The fixed gate alphabet.  Primitives: PrepZero, TraceOut, Hadamard,
// PhaseShift (T = diag(1, e^{i pi/4})), Toffoli.  Convenience macros PauliX,
// CNOT, PauliZ expand to primitives; simulation may apply them natively (the
// composite unitary), which is equivalent and cheaper.

#include <vector>

#include "quclone/linalg.hpp"

namespace quclone {

enum class GateKind {
    PrepZero,   // appends a fresh |0> wire at the end; no explicit target
    TraceOut,   // removes one wire (partial trace); mid-circuit is legal
    Hadamard,
    PhaseShift,  // T
    Toffoli,
    PauliX,  // macro: H T^4 H
    CNOT,    // macro: Toffoli against a prepared-and-traced |1> ancilla
    PauliZ,  // macro: T^4
};

// Number of explicit wire targets each kind carries.  PrepZero has none: the
// wire it creates is always appended after the current last wire.
int gate_arity(GateKind k);

bool is_macro(GateKind k);
bool is_unitary(GateKind k);  // everything except PrepZero / TraceOut

const char* gate_name(GateKind k);

struct Gate {
    GateKind kind;
    std::vector<int> wires;  // size == gate_arity(kind), distinct

    bool operator==(const Gate&) const = default;
};

inline Gate g_prep() { return {GateKind::PrepZero, {}}; }
inline Gate g_trace(int w) { return {GateKind::TraceOut, {w}}; }
inline Gate g_h(int w) { return {GateKind::Hadamard, {w}}; }
inline Gate g_t(int w) { return {GateKind::PhaseShift, {w}}; }
inline Gate g_tof(int a, int b, int c) { return {GateKind::Toffoli, {a, b, c}}; }
inline Gate g_x(int w) { return {GateKind::PauliX, {w}}; }
inline Gate g_cnot(int c, int t) { return {GateKind::CNOT, {c, t}}; }
inline Gate g_z(int w) { return {GateKind::PauliZ, {w}}; }

// Unitary matrix of a unitary gate kind (2x2, 4x4 for CNOT, 8x8 for Toffoli).
// Throws std::invalid_argument for PrepZero / TraceOut.
Mat gate_matrix(GateKind k);

}  // namespace quclone
