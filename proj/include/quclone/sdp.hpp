#pragma once

// Hand-rolled solver for the one optimization shape the games need:
// maximize Tr[J M] over Choi matrices J (PSD, Tr_out J = I). Projected
// gradient ascent with Dykstra's alternating projections onto the
// feasible set. Dimensions stay at or below 64, so nothing clever is
// required; what matters is a monotone objective and tight feasibility.

#include "quclone/linalg.hpp"

namespace quclone {

struct ChoiSdpResult {
    Mat j;                 // final feasible point
    double objective = 0;  // Tr[J M]
    int iterations = 0;
    bool converged = false;
    bool monotone = true;    // no accepted step decreased the objective by > 1e-10
    double feas_psd = 0;     // |most negative eigenvalue| of J
    double feas_tp = 0;      // max-abs entry of Tr_out J - I
};

struct ChoiSdpOptions {
    double tol = 1e-8;       // objective-change threshold
    int patience = 50;       // consecutive small-change iterations to stop
    int max_iters = 5000;
    int dykstra_iters = 400;
    double dykstra_tol = 1e-13;
};

// Projects onto {J : Tr_out J = I_in} orthogonally (in-place formula).
Mat project_trace_preserving(const Mat& j, int d_in, int d_out);

// Dykstra projection onto PSD intersect trace-preserving.
Mat project_choi_feasible(const Mat& j, int d_in, int d_out, const ChoiSdpOptions& opt = {});

// Maximize Tr[J M] from feasible start j0. M must be Hermitian.
ChoiSdpResult maximize_choi_objective(const Mat& m, int d_in, int d_out, const Mat& j0,
                                      const ChoiSdpOptions& opt = {});

}  // namespace quclone
