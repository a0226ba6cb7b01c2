#pragma once
// Quantum state containers.  Wire 0 is the most significant bit of the basis
// index everywhere, so basis state |s> for a bit string s sits at amplitude
// index bits_to_index(s).  Zero-wire states are legal: a PureState is then the
// scalar 1 and a DensityState the 1x1 matrix [1].

#include <optional>

#include "quclone/linalg.hpp"

namespace quclone {

class PureState {
public:
    // |0...0> on n wires (n >= 0).
    explicit PureState(int wires = 0);
    PureState(int wires, Vec amplitudes);

    static PureState basis(const Bits& s);

    int wires() const { return wires_; }
    Eigen::Index dim() const { return amp_.size(); }
    const Vec& amplitudes() const { return amp_; }
    Vec& amplitudes() { return amp_; }

    // Throws std::invalid_argument unless the norm is 1 within EPS_STATE.
    void validate() const;

    cplx overlap(const PureState& other) const;  // <this|other>
    PureState tensor(const PureState& other) const;
    Mat density() const;  // |psi><psi|

private:
    int wires_;
    Vec amp_;
};

class DensityState {
public:
    explicit DensityState(int wires = 0);  // |0..0><0..0|
    DensityState(int wires, Mat rho);

    static DensityState basis(const Bits& s);
    static DensityState from_pure(const PureState& psi);

    int wires() const { return wires_; }
    Eigen::Index dim() const { return rho_.rows(); }
    const Mat& matrix() const { return rho_; }
    Mat& matrix() { return rho_; }

    // Hermitian and unit trace within EPS_STATE; PSD with min eigenvalue
    // >= -EPS_STATE.  Throws std::invalid_argument on violation.
    void validate() const;

    double purity() const;  // Tr(rho^2), real part
    DensityState tensor(const DensityState& other) const;

private:
    int wires_;
    Mat rho_;
};

// 1/2 || rho - sigma ||_1.  Computed from the spectrum of rho - sigma; inputs
// that are both pure within 1e-12 short-circuit to sqrt(1 - Tr(rho sigma)),
// which is the same value and avoids a large eigensolve.
double trace_distance(const Mat& rho, const Mat& sigma);
double trace_distance(const DensityState& rho, const DensityState& sigma);

// Conjugate-coding basis state |x^theta>: qubit i is |x_i> when theta_i = 0
// and H|x_i> when theta_i = 1.
PureState wiesner_encode(const Bits& x, const Bits& theta);

}  // namespace quclone
