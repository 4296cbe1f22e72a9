#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "specreg/opmatrix.hpp"
#include "specreg/types.hpp"

namespace specreg {

// Extremal eigenpair computations on the symmetric operator A = M^T M - aI.
// Because A is symmetric, its largest singular value is max |eigenvalue|,
// and the singular triple is (|lambda|, sign(lambda) * v, v).

struct EigenPair {
    double lambda = 0.0;    // eigenvalue estimate
    std::vector<double> v;  // unit vector
    double residual = 0.0;  // ||A v - lambda v||_2
    bool converged = false;
};

struct SpectrumSummary {
    double sigma_max = 0.0; // largest singular value of M
    double sigma_min = 0.0; // smallest of the min(rows, cols) singular values
    double kappa = 0.0;     // sigma_max / sigma_min, +inf when sigma_min == 0
    double penalty = 0.0;   // max |eig(M^T M - alpha I)|
    double gap = 0.0;       // |lambda_1| - |lambda_2| of M^T M - alpha I
};

struct BoundsCheck {
    bool applicable = false; // premise penalty < t * alpha satisfied
    bool ok = true;          // bounds hold (vacuously true when not applicable)
};

// Two eigenpairs of A largest in |lambda|, ranked |l1| >= |l2|. Block-2
// subspace iteration: advance both vectors through the operator, then do a
// Rayleigh-Ritz extraction in the 2-dimensional subspace and re-rank by
// magnitude. Iterates until both residuals fall under tol * |l1|; hitting
// maxit returns the pairs with per-pair flags rather than throwing, so a
// settled dominant pair stays usable when the runner-up sits on a near-tie.
std::pair<EigenPair, EigenPair> top2_init(const SymOp& op, double tol = 1e-8,
                                          int maxit = 1000, std::uint64_t seed = 12345);

// `iters` steps of the same iteration starting from the given vectors;
// output is re-ranked by |lambda|, which is what keeps the dominant pair
// dominant when the spectrum reorders between descent steps.
std::pair<EigenPair, EigenPair> top2_refine(const SymOp& op,
                                            std::pair<EigenPair, EigenPair> pairs,
                                            int iters);

// Dense-path summary of the full spectrum (sigma extremes, condition
// number, penalty, top gap), all through the brute-force oracle.
SpectrumSummary spectrum_summary(const Kernel4D& K, int N, double alpha,
                                 std::size_t max_entries = 10000000);

// If summary.penalty < t * alpha, verifies
//   sqrt((1-t) alpha) < sigma_min <= sigma_max < sqrt((1+t) alpha)
// and kappa < sqrt((1+t)/(1-t)); otherwise the premise fails and the check
// reports not-applicable (ok remains true).
BoundsCheck check_bounds(const SpectrumSummary& summary, double alpha, double t);

} // namespace specreg
