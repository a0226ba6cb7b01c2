#pragma once
// Exact compilations of a few derived unitaries into the fixed gate alphabet.
// These are used by the game wrappers and the honest decoder builders; each
// identity is verified numerically by the unit tests.
//
//   controlled-H:  CH(c,t) = (I (x) V) CNOT (I (x) V^dag)  with  V = T^2 H T,
//                  because (T^2 H T) X (T^2 H T)^dag = H.
//   R_y(pi/4):     T^2 (H T H) T^6 up to global phase (S R_x(pi/4) S^dag
//                  with S = T^2 and H T H = e^{i pi/8} R_x(pi/4)).

#include "quclone/circuit.hpp"

namespace quclone {

// Appends gate layers computing controlled-H from control c onto target t.
void append_controlled_h(Circuit& c, int control, int target);

// Appends R_y(pi/4) (Breidbart rotation) on the target, up to global phase:
// |0> -> cos(pi/8)|0> + sin(pi/8)|1>.
void append_ry45(Circuit& c, int target);

// Appends R_y(-pi/4) on the target, up to global phase.
void append_ry45_inv(Circuit& c, int target);

// Appends an AND-reduction of the given wires into a freshly prepared result
// wire via a Toffoli cascade; returns the result wire index.  Consumes
// (dirties) nothing: inputs are left unchanged; intermediate ancillas remain
// live until the caller traces them.  For fewer than two inputs: one input
// wire is copied (CNOT) into the fresh result; zero inputs yield a fresh |1>.
int append_and_chain(Circuit& c, const std::vector<int>& inputs, int live_wires);

// Inverse (adjoint) of a unitary-only circuit over the same wires: layers
// reversed, each gate inverted inside the alphabet (T^-1 = T^7; H, Toffoli,
// X, CNOT, Z are involutions).  Throws if the circuit contains prep/trace.
Circuit inverse_unitary(const Circuit& c);

}  // namespace quclone
