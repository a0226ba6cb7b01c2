#pragma once
// Quantum channels in Kraus and Choi form.
//
// Choi convention: for a channel Phi with i_w input and o_w output wires,
//   J(Phi) = sum_{ij} |i><j|_in (x) Phi(|i><j|)_out,
// i.e. the *input* factor is the most significant index block.  Under this
// convention complete positivity is J >= 0 and trace preservation is
// Tr_out J = I_in.  J(id_1) has trace 2; the fully depolarizing qubit channel
// has J = I_4 / 2.

#include <functional>
#include <random>

#include "quclone/circuit.hpp"

namespace quclone {

struct KrausChannel {
    int in_wires = 0;
    int out_wires = 0;
    std::vector<Mat> ops;

    // Completeness sum_k K^dag K = I within EPS_CHANNEL, consistent shapes.
    void validate() const;
};

struct ChoiChannel {
    int in_wires = 0;
    int out_wires = 0;
    Mat j;

    // Hermitian, PSD (min eigenvalue >= -EPS_CHANNEL), Tr_out J = I within
    // EPS_CHANNEL.
    void validate() const;

    Eigen::Index in_dim() const { return Eigen::Index(1) << in_wires; }
    Eigen::Index out_dim() const { return Eigen::Index(1) << out_wires; }
};

ChoiChannel choi_of(const KrausChannel& k);
KrausChannel kraus_from_choi(const ChoiChannel& c);  // via eigendecomposition

// Choi matrix of a circuit, obtained by pushing |i><j| through the simulator's
// linear extension.
ChoiChannel circuit_choi(const Circuit& c, const SimLimits& limits = default_limits());

ChoiChannel identity_channel(int wires);
ChoiChannel depolarizing_channel();  // single qubit, fully depolarizing

// Phi(rho) for a full-width input.
Mat channel_apply(const ChoiChannel& ch, const Mat& rho);
DensityState channel_apply(const ChoiChannel& ch, const DensityState& rho);

// Applies the channel to the first ch.in_wires wires of an n-wire operator.
// Result wire order: [channel outputs][remaining wires, original order].
Mat channel_apply_prefix(const ChoiChannel& ch, const Mat& rho, int total_wires);

// Applies the channel to an arbitrary wire subset.  Result wire order:
// [channel outputs][untouched wires in original relative order].
Mat channel_apply_to(const ChoiChannel& ch, const Mat& rho, int total_wires,
                     const std::vector<int>& targets);

// Tensor product of channels (block order: a's wires then b's wires).
ChoiChannel channel_tensor(const ChoiChannel& a, const ChoiChannel& b);

// Haar-seeded random CPTP channel via a random Stinespring isometry with
// env_wires environment wires.
ChoiChannel random_channel(int in_wires, int out_wires, int env_wires, std::mt19937_64& rng);

// Random pure state (Gaussian amplitudes, normalized).
PureState random_pure_state(int wires, std::mt19937_64& rng);

// Haar-random unitary on the given wire count (QR of a Ginibre matrix).
Mat random_unitary(int wires, std::mt19937_64& rng);

// Classical function z -> g(z) as a measure-then-compute channel:
// J = sum_z |z><z| (x) |g(z)><g(z)|.
ChoiChannel classical_function_channel(int in_wires, int out_wires,
                                       const std::function<Bits(const Bits&)>& g);

// Measure computationally, keep the outcome (fully dephasing when out == in).
ChoiChannel measure_channel(int wires);

}  // namespace quclone
