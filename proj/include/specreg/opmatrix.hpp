#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "specreg/tensorconv.hpp"
#include "specreg/types.hpp"

namespace specreg {

// Correspondence between a kernel K and the transformation matrix M with
// vec(conv_multi(K, X)) = M * vec(X) for every X. M has hN^2 rows and gN^2
// columns and is doubly block banded Toeplitz per channel pair.

// Bijection between (i, j, d) and the linear index of vec():
// a column of a channel is contiguous, columns are stacked, channels are
// outermost.
struct VecIndexMap {
    int N = 0;
    int c = 0;

    VecIndexMap(int N_, int c_) : N(N_), c(c_) {}

    std::size_t size() const { return static_cast<std::size_t>(N) * N * c; }

    std::size_t to_linear(int i, int j, int d) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(N) * (static_cast<std::size_t>(j) +
               static_cast<std::size_t>(N) * static_cast<std::size_t>(d));
    }

    void from_linear(std::size_t ell, int& i, int& j, int& d) const {
        i = static_cast<int>(ell % N);
        j = static_cast<int>((ell / N) % N);
        d = static_cast<int>(ell / (static_cast<std::size_t>(N) * N));
    }
};

std::vector<double> vec(const Tensor3& X);
Tensor3 unvec(const std::vector<double>& x, int N, int c);

// Dense M for the brute-force paths. Refuses to allocate above max_entries
// (the implicit GramOperator below covers larger sizes).
DenseMatrix materialize(const Kernel4D& K, int N, std::size_t max_entries = 10000000);

// All matrix positions (i, j) that structurally hold the kernel tap
// (p, q, z, y), independent of the kernel's numeric values. The sets of
// distinct taps are disjoint and their union is exactly the structural
// nonzero pattern of M.
struct OmegaSet {
    int p = 0, q = 0, z = 0, y = 0; // 0-based tap
    std::vector<std::pair<std::int32_t, std::int32_t>> entries; // 0-based (row, col)
};

// Returned in kernel storage order (p fastest, then q, z, y).
std::vector<OmegaSet> omega_enumerate(int k, int g, int h, int N);

// Abstract symmetric operator; the spectral solvers are written against
// this interface so they run identically on implicit and dense operators.
struct SymOp {
    virtual ~SymOp() = default;
    virtual std::size_t dim() const = 0;
    virtual void apply(const double* x, double* y) const = 0;

    std::vector<double> apply(const std::vector<double>& x) const;
};

// A = M^T M - alpha I of dimension gN^2, applied as
// conv_adjoint(K, conv_multi(K, unvec(x))) - alpha x without ever forming
// M. One apply costs O(N^2 k^2 g h) versus O(g^2 N^4) dense storage.
struct GramOperator final : SymOp {
    Kernel4D kernel;
    int N = 0;
    double alpha = 0.0;

    GramOperator(Kernel4D K, int N_, double alpha_);

    using SymOp::apply; // keep the checked vector overload visible

    std::size_t dim() const override { return static_cast<std::size_t>(kernel.g) * N * N; }
    void apply(const double* x, double* y) const override;
};

} // namespace specreg
