#include "quclone/linalg.hpp"

#include <cstdlib>

namespace quclone {

SimLimits default_limits() {
    SimLimits lim;
    if (const char* cap = std::getenv("QUCLONE_CAP_MB")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(cap, &end, 10);
        if (end && *end == '\0' && v > 0) lim.max_megabytes = v;
    }
    return lim;
}

Mat psd_clip(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) < 0.0) ev(i) = 0.0;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Mat partial_trace_qubits(const Mat& rho, int n, const std::vector<int>& traced) {
    const Eigen::Index dim = Eigen::Index(1) << n;
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("partial_trace_qubits: dimension mismatch");

    std::vector<bool> is_traced(static_cast<std::size_t>(n), false);
    for (int q : traced) {
        if (q < 0 || q >= n) throw std::invalid_argument("partial_trace_qubits: bad wire");
        if (is_traced[static_cast<std::size_t>(q)])
            throw std::invalid_argument("partial_trace_qubits: duplicate wire");
        is_traced[static_cast<std::size_t>(q)] = true;
    }

    // Wire q contributes bit (n-1-q) of the index (wire 0 most significant).
    std::vector<int> kept_bits, traced_bits;
    for (int q = 0; q < n; ++q) {
        int bit = n - 1 - q;
        (is_traced[static_cast<std::size_t>(q)] ? traced_bits : kept_bits).push_back(bit);
    }
    const int nk = static_cast<int>(kept_bits.size());
    const int nt = static_cast<int>(traced_bits.size());
    const Eigen::Index kd = Eigen::Index(1) << nk;
    const Eigen::Index td = Eigen::Index(1) << nt;

    auto compose = [](const std::vector<int>& bits, Eigen::Index sub) {
        // bits are listed most-significant first within the subindex
        Eigen::Index full = 0;
        int m = static_cast<int>(bits.size());
        for (int i = 0; i < m; ++i)
            if ((sub >> (m - 1 - i)) & 1) full |= Eigen::Index(1) << bits[static_cast<std::size_t>(i)];
        return full;
    };

    Mat out = Mat::Zero(kd, kd);
    for (Eigen::Index a = 0; a < kd; ++a) {
        const Eigen::Index abase = compose(kept_bits, a);
        for (Eigen::Index b = 0; b < kd; ++b) {
            const Eigen::Index bbase = compose(kept_bits, b);
            cplx acc = 0.0;
            for (Eigen::Index t = 0; t < td; ++t) {
                const Eigen::Index toff = compose(traced_bits, t);
                acc += rho(abase | toff, bbase | toff);
            }
            out(a, b) = acc;
        }
    }
    return out;
}

Mat permute_qubits(const Mat& rho, int n, const std::vector<int>& perm) {
    const Eigen::Index dim = Eigen::Index(1) << n;
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("permute_qubits: dimension mismatch");
    if (static_cast<int>(perm.size()) != n)
        throw std::invalid_argument("permute_qubits: bad permutation size");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int p : perm) {
        if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)])
            throw std::invalid_argument("permute_qubits: not a permutation");
        seen[static_cast<std::size_t>(p)] = true;
    }

    // index map: result index r -> source index s where bit for result wire i
    // comes from source wire perm[i]
    std::vector<Eigen::Index> map(static_cast<std::size_t>(dim));
    for (Eigen::Index r = 0; r < dim; ++r) {
        Eigen::Index s = 0;
        for (int i = 0; i < n; ++i) {
            if ((r >> (n - 1 - i)) & 1) s |= Eigen::Index(1) << (n - 1 - perm[static_cast<std::size_t>(i)]);
        }
        map[static_cast<std::size_t>(r)] = s;
    }
    Mat out(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index b = 0; b < dim; ++b)
            out(a, b) = rho(map[static_cast<std::size_t>(a)], map[static_cast<std::size_t>(b)]);
    return out;
}

}  // namespace quclone
