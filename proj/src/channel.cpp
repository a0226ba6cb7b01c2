#include "quclone/channel.hpp"

#include <cmath>

namespace quclone {

void KrausChannel::validate() const {
    if (in_wires < 0 || out_wires < 0) throw std::invalid_argument("KrausChannel: negative wires");
    if (ops.empty()) throw std::invalid_argument("KrausChannel: no operators");
    const Eigen::Index di = Eigen::Index(1) << in_wires;
    const Eigen::Index dg = Eigen::Index(1) << out_wires;
    Mat acc = Mat::Zero(di, di);
    for (const Mat& k : ops) {
        if (k.rows() != dg || k.cols() != di)
            throw std::invalid_argument("KrausChannel: operator shape mismatch");
        acc += k.adjoint() * k;
    }
    if ((acc - Mat::Identity(di, di)).cwiseAbs().maxCoeff() > EPS_CHANNEL)
        throw std::invalid_argument("KrausChannel: completeness violated beyond tolerance");
}

void ChoiChannel::validate() const {
    if (in_wires < 0 || out_wires < 0) throw std::invalid_argument("ChoiChannel: negative wires");
    const Eigen::Index d = in_dim() * out_dim();
    if (j.rows() != d || j.cols() != d) throw std::invalid_argument("ChoiChannel: matrix shape mismatch");
    if (!approx_hermitian(j, EPS_CHANNEL))
        throw std::invalid_argument("ChoiChannel: not Hermitian within tolerance");
    Eigen::VectorXd ev = herm_eigenvalues((j + j.adjoint()) / 2.0);
    if (ev.size() > 0 && ev(0) < -EPS_CHANNEL)
        throw std::invalid_argument("ChoiChannel: not PSD within tolerance");
    // Tr_out J = I_in: trace out the low-order (output) block.
    Mat ti = Mat::Zero(in_dim(), in_dim());
    for (Eigen::Index i = 0; i < in_dim(); ++i)
        for (Eigen::Index k = 0; k < in_dim(); ++k) {
            cplx acc = 0.0;
            for (Eigen::Index o = 0; o < out_dim(); ++o) acc += j(i * out_dim() + o, k * out_dim() + o);
            ti(i, k) = acc;
        }
    if ((ti - Mat::Identity(in_dim(), in_dim())).cwiseAbs().maxCoeff() > EPS_CHANNEL)
        throw std::invalid_argument("ChoiChannel: trace preservation violated beyond tolerance");
}

ChoiChannel choi_of(const KrausChannel& k) {
    k.validate();
    ChoiChannel c;
    c.in_wires = k.in_wires;
    c.out_wires = k.out_wires;
    const Eigen::Index di = c.in_dim(), dg = c.out_dim();
    c.j = Mat::Zero(di * dg, di * dg);
    for (const Mat& op : k.ops) {
        // vec(K) with index (i,o): amplitude K(o,i)
        Vec v(di * dg);
        for (Eigen::Index i = 0; i < di; ++i)
            for (Eigen::Index o = 0; o < dg; ++o) v(i * dg + o) = op(o, i);
        c.j += v * v.adjoint();
    }
    return c;
}

KrausChannel kraus_from_choi(const ChoiChannel& c) {
    c.validate();
    KrausChannel k;
    k.in_wires = c.in_wires;
    k.out_wires = c.out_wires;
    Eigen::SelfAdjointEigenSolver<Mat> es((c.j + c.j.adjoint()) / 2.0);
    const Eigen::Index di = c.in_dim(), dg = c.out_dim();
    for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
        const double lam = es.eigenvalues()(e);
        if (lam <= 1e-12) continue;
        Mat op(dg, di);
        for (Eigen::Index i = 0; i < di; ++i)
            for (Eigen::Index o = 0; o < dg; ++o) op(o, i) = std::sqrt(lam) * es.eigenvectors()(i * dg + o, e);
        k.ops.push_back(op);
    }
    if (k.ops.empty()) k.ops.push_back(Mat::Zero(dg, di));
    return k;
}

ChoiChannel circuit_choi(const Circuit& c, const SimLimits& limits) {
    c.validate();
    ChoiChannel ch;
    ch.in_wires = c.input_wires;
    ch.out_wires = c.output_wires();
    const Eigen::Index di = ch.in_dim(), dg = ch.out_dim();
    ch.j = Mat::Zero(di * dg, di * dg);
    for (Eigen::Index i = 0; i < di; ++i)
        for (Eigen::Index k = 0; k < di; ++k) {
            Mat unit = Mat::Zero(di, di);
            unit(i, k) = 1.0;
            Mat out = apply_circuit_raw(c, unit, limits);
            for (Eigen::Index o = 0; o < dg; ++o)
                for (Eigen::Index p = 0; p < dg; ++p) ch.j(i * dg + o, k * dg + p) = out(o, p);
        }
    return ch;
}

ChoiChannel identity_channel(int wires) {
    ChoiChannel c;
    c.in_wires = wires;
    c.out_wires = wires;
    const Eigen::Index d = c.in_dim();
    Vec v = Vec::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = 1.0;
    c.j = v * v.adjoint();
    return c;
}

ChoiChannel depolarizing_channel() {
    ChoiChannel c;
    c.in_wires = 1;
    c.out_wires = 1;
    c.j = Mat::Identity(4, 4) / 2.0;
    return c;
}

Mat channel_apply(const ChoiChannel& ch, const Mat& rho) {
    const Eigen::Index di = ch.in_dim(), dg = ch.out_dim();
    if (rho.rows() != di || rho.cols() != di)
        throw std::invalid_argument("channel_apply: input dimension mismatch");
    Mat out = Mat::Zero(dg, dg);
    for (Eigen::Index i = 0; i < di; ++i)
        for (Eigen::Index k = 0; k < di; ++k) {
            const cplx r = rho(i, k);
            if (r == cplx(0.0)) continue;
            for (Eigen::Index o = 0; o < dg; ++o)
                for (Eigen::Index p = 0; p < dg; ++p) out(o, p) += r * ch.j(i * dg + o, k * dg + p);
        }
    return out;
}

DensityState channel_apply(const ChoiChannel& ch, const DensityState& rho) {
    if (rho.wires() != ch.in_wires) throw std::invalid_argument("channel_apply: wire mismatch");
    return DensityState(ch.out_wires, channel_apply(ch, rho.matrix()));
}

Mat channel_apply_prefix(const ChoiChannel& ch, const Mat& rho, int total_wires) {
    const int rest = total_wires - ch.in_wires;
    if (rest < 0) throw std::invalid_argument("channel_apply_prefix: channel wider than state");
    const Eigen::Index di = ch.in_dim(), dg = ch.out_dim();
    const Eigen::Index dr = Eigen::Index(1) << rest;
    if (rho.rows() != di * dr || rho.cols() != di * dr)
        throw std::invalid_argument("channel_apply_prefix: dimension mismatch");
    Mat out = Mat::Zero(dg * dr, dg * dr);
    for (Eigen::Index i = 0; i < di; ++i)
        for (Eigen::Index k = 0; k < di; ++k)
            for (Eigen::Index o = 0; o < dg; ++o)
                for (Eigen::Index p = 0; p < dg; ++p) {
                    const cplx jv = ch.j(i * dg + o, k * dg + p);
                    if (jv == cplx(0.0)) continue;
                    for (Eigen::Index r = 0; r < dr; ++r)
                        for (Eigen::Index r2 = 0; r2 < dr; ++r2)
                            out(o * dr + r, p * dr + r2) += jv * rho(i * dr + r, k * dr + r2);
                }
    return out;
}

Mat channel_apply_to(const ChoiChannel& ch, const Mat& rho, int total_wires,
                     const std::vector<int>& targets) {
    if (static_cast<int>(targets.size()) != ch.in_wires)
        throw std::invalid_argument("channel_apply_to: target count mismatch");
    // Permute targets to the front, apply on the prefix, leave outputs in front.
    std::vector<bool> is_target(static_cast<std::size_t>(total_wires), false);
    for (int t : targets) {
        if (t < 0 || t >= total_wires) throw std::invalid_argument("channel_apply_to: bad target");
        if (is_target[static_cast<std::size_t>(t)])
            throw std::invalid_argument("channel_apply_to: duplicate target");
        is_target[static_cast<std::size_t>(t)] = true;
    }
    std::vector<int> perm = targets;
    for (int wq = 0; wq < total_wires; ++wq)
        if (!is_target[static_cast<std::size_t>(wq)]) perm.push_back(wq);
    Mat moved = permute_qubits(rho, total_wires, perm);
    return channel_apply_prefix(ch, moved, total_wires);
}

ChoiChannel channel_tensor(const ChoiChannel& a, const ChoiChannel& b) {
    ChoiChannel c;
    c.in_wires = a.in_wires + b.in_wires;
    c.out_wires = a.out_wires + b.out_wires;
    const Eigen::Index dia = a.in_dim(), dib = b.in_dim();
    const Eigen::Index dga = a.out_dim(), dgb = b.out_dim();
    c.j = Mat::Zero(c.in_dim() * c.out_dim(), c.in_dim() * c.out_dim());
    for (Eigen::Index ia = 0; ia < dia; ++ia)
        for (Eigen::Index ka = 0; ka < dia; ++ka)
            for (Eigen::Index oa = 0; oa < dga; ++oa)
                for (Eigen::Index pa = 0; pa < dga; ++pa) {
                    const cplx ja = a.j(ia * dga + oa, ka * dga + pa);
                    if (ja == cplx(0.0)) continue;
                    for (Eigen::Index ib = 0; ib < dib; ++ib)
                        for (Eigen::Index kb = 0; kb < dib; ++kb)
                            for (Eigen::Index ob = 0; ob < dgb; ++ob)
                                for (Eigen::Index pb = 0; pb < dgb; ++pb) {
                                    const cplx jb = b.j(ib * dgb + ob, kb * dgb + pb);
                                    if (jb == cplx(0.0)) continue;
                                    const Eigen::Index row =
                                        ((ia * dib + ib) * dga + oa) * dgb + ob;
                                    const Eigen::Index col =
                                        ((ka * dib + kb) * dga + pa) * dgb + pb;
                                    c.j(row, col) += ja * jb;
                                }
                }
    return c;
}

Mat random_unitary(int wires, std::mt19937_64& rng) {
    const Eigen::Index d = Eigen::Index(1) << wires;
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    // Multiply each column by the phase of the matching R diagonal entry so
    // the distribution is exactly Haar rather than QR-convention-skewed.
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
        const cplx rii = r(i, i);
        const double m = std::abs(rii);
        q.col(i) *= (m > 0.0) ? rii / m : cplx(1.0);
    }
    return q;
}

ChoiChannel random_channel(int in_wires, int out_wires, int env_wires, std::mt19937_64& rng) {
    // Random isometry via the first columns of a Haar unitary on out+env wires,
    // then trace out the environment: K_e = (I (x) <e|) V.
    const Eigen::Index di = Eigen::Index(1) << in_wires;
    const Eigen::Index dg = Eigen::Index(1) << out_wires;
    const Eigen::Index de = Eigen::Index(1) << env_wires;
    if (dg * de < di) throw std::invalid_argument("random_channel: no isometry fits");
    Mat u = random_unitary(out_wires + env_wires, rng);
    KrausChannel k;
    k.in_wires = in_wires;
    k.out_wires = out_wires;
    for (Eigen::Index e = 0; e < de; ++e) {
        Mat op(dg, di);
        for (Eigen::Index o = 0; o < dg; ++o)
            for (Eigen::Index i = 0; i < di; ++i) op(o, i) = u(o * de + e, i);
        k.ops.push_back(op);
    }
    return choi_of(k);
}

PureState random_pure_state(int wires, std::mt19937_64& rng) {
    const Eigen::Index d = Eigen::Index(1) << wires;
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = cplx(gauss(rng), gauss(rng));
    v /= v.norm();
    return PureState(wires, v);
}

ChoiChannel classical_function_channel(int in_wires, int out_wires,
                                       const std::function<Bits(const Bits&)>& g) {
    ChoiChannel c;
    c.in_wires = in_wires;
    c.out_wires = out_wires;
    const Eigen::Index di = c.in_dim(), dg = c.out_dim();
    c.j = Mat::Zero(di * dg, di * dg);
    for (Eigen::Index z = 0; z < di; ++z) {
        const Bits out = g(index_to_bits(static_cast<std::uint64_t>(z), in_wires));
        if (static_cast<int>(out.size()) != out_wires)
            throw std::invalid_argument("classical_function_channel: bad output length");
        const Eigen::Index o = static_cast<Eigen::Index>(bits_to_index(out));
        c.j(z * dg + o, z * dg + o) += 1.0;
    }
    return c;
}

ChoiChannel measure_channel(int wires) {
    return classical_function_channel(wires, wires, [](const Bits& b) { return b; });
}

}  // namespace quclone
