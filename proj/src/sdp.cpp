#include "quclone/sdp.hpp"

#include <stdexcept>

namespace quclone {

Mat project_trace_preserving(const Mat& j, int d_in, int d_out) {
    // Tr_out sums the d_out x d_out diagonal blocks down to d_in x d_in.
    Mat tr = Mat::Zero(d_in, d_in);
    for (int i = 0; i < d_in; ++i)
        for (int k = 0; k < d_in; ++k)
            for (int o = 0; o < d_out; ++o)
                tr(i, k) += j(i * d_out + o, k * d_out + o);
    const Mat defect = (Mat::Identity(d_in, d_in) - tr) / static_cast<double>(d_out);
    return j + kron(defect, Mat::Identity(d_out, d_out));
}

Mat project_choi_feasible(const Mat& j, int d_in, int d_out, const ChoiSdpOptions& opt) {
    Mat y = (j + j.adjoint()) / 2.0;
    Mat p = Mat::Zero(j.rows(), j.cols());
    Mat q = Mat::Zero(j.rows(), j.cols());
    Mat prev = y;
    for (int it = 0; it < opt.dykstra_iters; ++it) {
        const Mat a = psd_clip(y + p);
        p = y + p - a;
        const Mat b = project_trace_preserving(a + q, d_in, d_out);
        q = a + q - b;
        y = b;
        if ((y - prev).cwiseAbs().maxCoeff() < opt.dykstra_tol) break;
        prev = y;
    }
    return y;
}

namespace {

double objective_of(const Mat& j, const Mat& m) {
    return j.cwiseProduct(m.conjugate()).sum().real();  // Tr[J M], both Hermitian
}

}  // namespace

ChoiSdpResult maximize_choi_objective(const Mat& m, int d_in, int d_out, const Mat& j0,
                                      const ChoiSdpOptions& opt) {
    if (m.rows() != static_cast<long>(d_in) * d_out || m.rows() != m.cols())
        throw std::invalid_argument("maximize_choi_objective: objective dimension mismatch");
    if (j0.rows() != m.rows() || j0.cols() != m.cols())
        throw std::invalid_argument("maximize_choi_objective: start dimension mismatch");

    const double lips = herm_eigenvalues((m + m.adjoint()) / 2.0).cwiseAbs().maxCoeff();
    double step = lips > 0 ? 1.0 / lips : 1.0;

    ChoiSdpResult res;
    res.j = project_choi_feasible(j0, d_in, d_out, opt);
    res.objective = objective_of(res.j, m);

    int quiet = 0;
    for (int it = 0; it < opt.max_iters; ++it) {
        res.iterations = it + 1;
        Mat cand;
        double cand_obj = 0;
        double s = step;
        bool accepted = false;
        for (int back = 0; back < 30; ++back) {
            cand = project_choi_feasible(res.j + s * m, d_in, d_out, opt);
            cand_obj = objective_of(cand, m);
            if (cand_obj >= res.objective - 1e-10) {
                accepted = true;
                break;
            }
            s /= 2.0;
        }
        if (!accepted) break;  // projection noise floor reached
        if (cand_obj < res.objective - 1e-10) res.monotone = false;
        const double delta = cand_obj - res.objective;
        res.j = std::move(cand);
        res.objective = cand_obj;
        quiet = (std::abs(delta) < opt.tol) ? quiet + 1 : 0;
        if (quiet >= opt.patience) {
            res.converged = true;
            break;
        }
    }

    const Eigen::VectorXd ev = herm_eigenvalues((res.j + res.j.adjoint()) / 2.0);
    res.feas_psd = std::max(0.0, -ev.minCoeff());
    Mat tr = Mat::Zero(d_in, d_in);
    for (int i = 0; i < d_in; ++i)
        for (int k = 0; k < d_in; ++k)
            for (int o = 0; o < d_out; ++o)
                tr(i, k) += res.j(i * d_out + o, k * d_out + o);
    res.feas_tp = (tr - Mat::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
    return res;
}

}  // namespace quclone
