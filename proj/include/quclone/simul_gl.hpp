#pragma once

// Simultaneous inner-product extraction. Two non-communicating
// guessers share a state correlated with strings (x_B, x_C); each
// receives a fresh uniform challenge y and guesses x . y. The
// transform turns an inner-product guesser, supplied as a unitary
// dilation, into a string guesser by running it coherently against a
// phase target between Hadamard layers. The harness measures
// both figures of merit exactly:
//   advantage = E[ both inner products correct ] - 1/2,
//   string success = E[ both strings exactly correct ].

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "quclone/channel.hpp"
#include "quclone/compile.hpp"

namespace quclone {

struct InnerProductGuesser {
    int ell = 0;         // challenge length
    int side_wires = 0;  // qubits of shared side information
    int ancillas = 0;    // work wires prepared |0>
    // Unitary gates only, on ell + side_wires + ancillas wires laid out
    // as [challenge | side info | work].
    Circuit unitary;
    int output_wire = 0;  // computational value = the guess

    void validate() const;

    // Measured form: (ell + side_wires) -> 1, tracing all but the
    // output wire after the dilation runs.
    ChoiChannel guess_channel(const SimLimits& limits = default_limits()) const;
};

// Turns a guess circuit whose only non-unitary gates are PrepZero into
// a dilation: the prepared wires become declared work wires (numbering
// is unchanged because preps only ever append).
InnerProductGuesser dilate_guesser(const Circuit& guess, int ell, int output_wire);

// The extraction transform: a (side_wires, ell)-circuit. Prepares the
// challenge register uniform and a phase target in |->, runs the
// dilation, kicks the guess into the phase, uncomputes, and reads the
// challenge register in the Hadamard basis.
Circuit gl_transform(const InnerProductGuesser& g, const SimLimits& limits = default_limits());

struct GLCaseEntry {
    Bits x_b;
    Bits x_c;
    double weight = 0.0;
    DensityState joint;  // b_wires + c_wires qubits, Bob's share first
};

struct GLHarnessCase {
    int ell = 0;
    int b_wires = 0;
    int c_wires = 0;
    std::vector<GLCaseEntry> entries;

    void validate() const;
};

// Point-mass case with classical side information |x_b> (x) |x_c>.
GLHarnessCase classical_point_case(const Bits& x_b, const Bits& x_c);

// Exact advantage; enumerates every (entry, y_B, y_C).
double measure_ip_advantage(const GLHarnessCase& c, const InnerProductGuesser& bob,
                            const InnerProductGuesser& charlie,
                            const SimLimits& limits = default_limits());

// Exact simultaneous string success of (b,ell)- and (c,ell)-guessers.
double measure_string_success(const GLHarnessCase& c, const Circuit& bob,
                              const Circuit& charlie,
                              const SimLimits& limits = default_limits());

struct GLEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
};

// Monte-Carlo advantage over sampled (entry, y_B, y_C) triples with
// exact cached terms; for challenge lengths past the exact loop.
GLEstimate measure_ip_advantage_mc(const GLHarnessCase& c, const InnerProductGuesser& bob,
                                   const InnerProductGuesser& charlie, std::uint64_t seed,
                                   std::uint64_t samples = 20000,
                                   const SimLimits& limits = default_limits());

// Builtin guessers over classical side information of length ell.
InnerProductGuesser parity_guesser(int ell);         // exact inner product
InnerProductGuesser constant_zero_guesser(int ell);  // ignores everything
// Exact inner product, then flip the answer with probability 1/4
// independent of all inputs (two work wires in |+> drive a Toffoli).
InnerProductGuesser noisy_parity_guesser(int ell);
// Same flip, but only on challenges whose first bit is 1.
InnerProductGuesser skewed_noisy_parity_guesser(int ell);

// (side, ell)-circuit answering uniformly at random.
Circuit random_string_guesser(int side, int ell);

struct KTCheck {
    double advantage = 0.0;
    double transformed_success = 0.0;
    double kt_floor = 0.0;  // max(advantage, 0)^3 / 2
    bool holds = false;
};

// Measures the advantage, transforms both guessers, measures the
// simultaneous string success, and compares against the cubic floor.
KTCheck kt_check(const GLHarnessCase& c, const InnerProductGuesser& bob,
                 const InnerProductGuesser& charlie,
                 const SimLimits& limits = default_limits());

nlohmann::json kt_check_to_json(const KTCheck& k);

}  // namespace quclone
