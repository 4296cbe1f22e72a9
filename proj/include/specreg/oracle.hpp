#pragma once

#include <cstddef>
#include <vector>

#include "specreg/types.hpp"

namespace specreg {

// Brute-force ground truth used to validate the fast paths: dense symmetric
// eigendecomposition, singular values through the Gram matrix, and central
// finite differences of the penalty. Everything here is self-contained —
// no external numerical libraries — so the reference results are auditable.

// Dense symmetric matrix; symmetry is asserted at construction.
struct DenseSym {
    std::size_t n = 0;
    std::vector<double> data; // row-major n*n

    DenseSym() = default;
    DenseSym(std::size_t n_, std::vector<double> a);

    double& at(std::size_t r, std::size_t c) { return data[r * n + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * n + c]; }
};

struct EighResult {
    std::vector<double> lambda; // descending
    DenseMatrix V;              // column i pairs with lambda[i]
};

// Full eigendecomposition via Householder tridiagonalization followed by
// implicit-shift QL. Every returned pair is checked against
//   ||S v - lambda v||_2 <= tol * ||S||_F
// and the eigenvector matrix against pairwise orthonormality (1e-9);
// violations throw. Deterministic: no randomness, fixed sweep order.
EighResult eigh_dense(const DenseSym& S, double tol = 1e-9);

// Eigenvalues only (descending); same reduction without accumulating the
// transform, roughly 4x faster and the workhorse for spectrum traces.
std::vector<double> eigvalsh_dense(const DenseSym& S);

// Cyclic Jacobi. Kept as an independently-coded cross-check for the QL
// solver; the two must agree to near machine precision on the same input.
EighResult jacobi_eigh(const DenseSym& S, int max_sweeps = 50);

// sqrt of the eigenvalues of the smaller-side Gram matrix, clamped at zero
// before the root; descending, length min(rows, cols).
std::vector<double> singvals_dense(const DenseMatrix& M);

// M M^T (left) or M^T M (right). Exactly symmetric by construction; zero
// entries of M are skipped, which makes Gram assembly cheap for the very
// sparse convolution transformation matrices.
DenseSym gram(const DenseMatrix& M, bool left);

// Eigenvalues of the smaller-side Gram of M(K), plus the count of extra
// structural zeros the gN^2-side spectrum carries when h < g (rank(M) is
// at most hN^2, so M^T M then has at least (g-h)N^2 zero eigenvalues).
struct MinSideSpectrum {
    std::vector<double> mu;   // descending
    std::size_t zero_pad = 0; // additional zeros on the gN^2 side
};
MinSideSpectrum gram_spectrum(const Kernel4D& K, int N, std::size_t max_entries = 10000000);

// max |mu - alpha| over the full gN^2-side Gram spectrum — the penalty,
// computed entirely on the dense path.
double dense_penalty(const Kernel4D& K, int N, double alpha,
                     std::size_t max_entries = 10000000);

// Central finite differences of dense_penalty per kernel coordinate.
Kernel4D fd_grad(const Kernel4D& K, int N, double alpha, double h_step = 1e-6);

} // namespace specreg
