#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "specreg/spectra.hpp"
#include "specreg/types.hpp"

namespace specreg {

// Settings for the descent loop. `iters = 0` is allowed and records only the
// initial state.
struct DescentConfig {
    double alpha = 1.0;
    double lr = 0.01;
    int iters = 50;
    int power_iters = 2;          // refine steps between kernel updates
    double init_tol = 1e-8;
    int init_maxit = 1000;
    std::uint64_t solver_seed = 12345; // start vectors for top2_init
    bool record_oracle = true;        // dense spectrum per recorded row

    void validate() const; // throws Error(invalid_argument) on bad values
};

// One recorded step. `penalty` is the Ritz estimate |lambda_1| the solver is
// actually tracking — for h < g it can dip below alpha while the tracked
// eigenvalue branch passes through the shifted null-space mass. The oracle
// columns (sigma_max, sigma_min, kappa, penalty_exact) are exact dense
// quantities and are NaN unless has_oracle is set.
struct TraceRow {
    int iter = 0;
    double penalty = 0.0;
    double sigma_max = std::numeric_limits<double>::quiet_NaN();
    double sigma_min = std::numeric_limits<double>::quiet_NaN();
    double kappa = std::numeric_limits<double>::quiet_NaN();
    bool gap_flag = false; // top-2 |lambda| nearly tied: gradient unreliable
    double grad_norm = 0.0;
    double penalty_exact = std::numeric_limits<double>::quiet_NaN();
    bool has_oracle = false;
};

struct PenaltyResult {
    double value = 0.0;
    bool converged = false;
};

struct DescentResult {
    Kernel4D kernel;
    std::vector<TraceRow> trace;
};

// sigma_max(M^T M - alpha I) via the matrix-free top-2 solver at tol 1e-8.
// Non-convergence is reported through the flag, not an exception.
PenaltyResult penalty(const Kernel4D& K, int N, double alpha);

// Gradient of the penalty at a (simple) dominant eigenpair, evaluated by the
// literal index-set sum over the materialized operator: for each kernel
// coordinate, sum v(j)*(Mu)(i) + u(j)*(Mv)(i) over its occupied positions
// (i, j), with u = sign(lambda) * v. Reference-grade: needs the dense matrix,
// so it is subject to the same size cap as materialize.
Kernel4D grad_direct(const Kernel4D& K, int N, double alpha, const EigenPair& pair,
                     std::size_t max_entries = 10000000);

// Same gradient without materializing anything: with U = unvec(u),
// V = unvec(v), a = conv_multi(K, U), b = conv_multi(K, V), the gradient is
// conv_weight_grad(b, U) + conv_weight_grad(a, V). Agrees with grad_direct to
// 1e-12 relative.
Kernel4D grad_fast(const Kernel4D& K, int N, double alpha, const EigenPair& pair);

// Gradient descent on the penalty: top2_init once, then per iteration take
// the gradient at the current dominant pair, step K <- K - lr * G, and
// re-track the pair with power_iters refine steps, re-ranking by |lambda|.
// Records iters + 1 rows (the initial state plus one per update). Non-finite
// kernel entries abort with a diagnostic naming the iteration.
DescentResult descend(const Kernel4D& K0, int N, const DescentConfig& config);

} // namespace specreg
