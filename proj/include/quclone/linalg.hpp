#pragma once
// Thin layer over Eigen for the dense complex linear algebra the library needs:
// Kronecker products, partial traces over qubit factors, Hermitian spectra.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "quclone/common.hpp"

namespace quclone {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

// Hermitian eigenvalues, ascending.
inline Eigen::VectorXd herm_eigenvalues(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// Clip a Hermitian matrix to the PSD cone (negative eigenvalues set to zero).
Mat psd_clip(const Mat& m);

// Partial trace over the listed qubits of a 2^n x 2^n matrix (qubit 0 is the
// most significant index factor, matching the simulator's wire order).
Mat partial_trace_qubits(const Mat& rho, int n, const std::vector<int>& traced);

// Permute the qubit tensor factors of a 2^n x 2^n matrix: wire i of the result
// is wire perm[i] of the input.
Mat permute_qubits(const Mat& rho, int n, const std::vector<int>& perm);

inline bool approx_hermitian(const Mat& m, double eps) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= eps;
}

}  // namespace quclone
