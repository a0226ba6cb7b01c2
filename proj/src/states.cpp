#include "quclone/states.hpp"

#include <cmath>

namespace quclone {

PureState::PureState(int wires) : wires_(wires) {
    if (wires < 0) throw std::invalid_argument("PureState: negative wire count");
    amp_ = Vec::Zero(Eigen::Index(1) << wires);
    amp_(0) = 1.0;
}

PureState::PureState(int wires, Vec amplitudes) : wires_(wires), amp_(std::move(amplitudes)) {
    if (wires < 0) throw std::invalid_argument("PureState: negative wire count");
    if (amp_.size() != (Eigen::Index(1) << wires))
        throw std::invalid_argument("PureState: amplitude count != 2^wires");
}

PureState PureState::basis(const Bits& s) {
    require_bits(s, "PureState::basis");
    PureState psi(static_cast<int>(s.size()));
    psi.amp_.setZero();
    psi.amp_(static_cast<Eigen::Index>(bits_to_index(s))) = 1.0;
    return psi;
}

void PureState::validate() const {
    double n2 = amp_.squaredNorm();
    if (std::abs(std::sqrt(n2) - 1.0) > EPS_STATE)
        throw std::invalid_argument("PureState: norm differs from 1 beyond tolerance");
}

cplx PureState::overlap(const PureState& other) const {
    if (wires_ != other.wires_) throw std::invalid_argument("overlap: wire mismatch");
    return amp_.dot(other.amp_);  // Eigen dot conjugates the left argument
}

PureState PureState::tensor(const PureState& other) const {
    return PureState(wires_ + other.wires_, kron(amp_, other.amp_));
}

Mat PureState::density() const { return amp_ * amp_.adjoint(); }

DensityState::DensityState(int wires) : wires_(wires) {
    if (wires < 0) throw std::invalid_argument("DensityState: negative wire count");
    const Eigen::Index d = Eigen::Index(1) << wires;
    rho_ = Mat::Zero(d, d);
    rho_(0, 0) = 1.0;
}

DensityState::DensityState(int wires, Mat rho) : wires_(wires), rho_(std::move(rho)) {
    if (wires < 0) throw std::invalid_argument("DensityState: negative wire count");
    const Eigen::Index d = Eigen::Index(1) << wires;
    if (rho_.rows() != d || rho_.cols() != d)
        throw std::invalid_argument("DensityState: matrix is not 2^wires square");
}

DensityState DensityState::basis(const Bits& s) {
    return from_pure(PureState::basis(s));
}

DensityState DensityState::from_pure(const PureState& psi) {
    return DensityState(psi.wires(), psi.density());
}

void DensityState::validate() const {
    if (!approx_hermitian(rho_, EPS_STATE))
        throw std::invalid_argument("DensityState: not Hermitian within tolerance");
    if (std::abs(rho_.trace().real() - 1.0) > EPS_STATE || std::abs(rho_.trace().imag()) > EPS_STATE)
        throw std::invalid_argument("DensityState: trace differs from 1 beyond tolerance");
    Eigen::VectorXd ev = herm_eigenvalues((rho_ + rho_.adjoint()) / 2.0);
    if (ev.size() > 0 && ev(0) < -EPS_STATE)
        throw std::invalid_argument("DensityState: negative eigenvalue beyond tolerance");
}

// Tr(rho^2) is the squared Frobenius norm for Hermitian rho.
double DensityState::purity() const { return rho_.squaredNorm(); }

DensityState DensityState::tensor(const DensityState& other) const {
    return DensityState(wires_ + other.wires_, kron(rho_, other.rho_));
}

double trace_distance(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    // Pure-pure shortcut: for |a><a| vs |b><b| the distance is
    // sqrt(1 - |<a|b>|^2) = sqrt(1 - Tr(rho sigma)). Both traces reduce
    // to Frobenius inner products because the inputs are Hermitian.
    const double pr = rho.squaredNorm();
    const double ps = sigma.squaredNorm();
    if (std::abs(pr - 1.0) < 1e-12 && std::abs(ps - 1.0) < 1e-12) {
        double ov = rho.cwiseProduct(sigma.conjugate()).sum().real();
        if (ov < 0.0) ov = 0.0;
        if (ov > 1.0) ov = 1.0;
        return std::sqrt(1.0 - ov);
    }
    Eigen::VectorXd ev = herm_eigenvalues(((rho - sigma) + (rho - sigma).adjoint()) / 2.0);
    return ev.cwiseAbs().sum() / 2.0;
}

double trace_distance(const DensityState& rho, const DensityState& sigma) {
    if (rho.wires() != sigma.wires()) throw std::invalid_argument("trace_distance: wire mismatch");
    return trace_distance(rho.matrix(), sigma.matrix());
}

PureState wiesner_encode(const Bits& x, const Bits& theta) {
    require_bits(x, "wiesner_encode x");
    require_bits(theta, "wiesner_encode theta");
    if (x.size() != theta.size())
        throw std::invalid_argument("wiesner_encode: x and theta length mismatch");
    const double s = 1.0 / std::sqrt(2.0);
    PureState out(0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        Vec q(2);
        if (theta[i] == '0') {
            q(0) = (x[i] == '0') ? 1.0 : 0.0;
            q(1) = (x[i] == '1') ? 1.0 : 0.0;
        } else {
            q(0) = s;
            q(1) = (x[i] == '0') ? s : -s;
        }
        out = out.tensor(PureState(1, q));
    }
    return out;
}

}  // namespace quclone
