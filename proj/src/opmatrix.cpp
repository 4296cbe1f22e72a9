#include "specreg/opmatrix.hpp"

#include <string>

namespace specreg {

std::vector<double> vec(const Tensor3& X) {
    X.validate();
    return X.data; // storage order of Tensor3 is exactly the vec order
}

Tensor3 unvec(const std::vector<double>& x, int N, int c) {
    if (N < 1 || c < 1)
        throw Error(Errc::invalid_argument, "unvec: dimensions must be positive");
    Tensor3 X(N, c);
    if (x.size() != X.data.size())
        throw Error(Errc::dimension_mismatch,
                    "unvec: vector length " + std::to_string(x.size()) + " does not match " +
                        std::to_string(X.data.size()));
    X.data = x;
    return X;
}

DenseMatrix materialize(const Kernel4D& K, int N, std::size_t max_entries) {
    K.validate();
    if (N < 1)
        throw Error(Errc::invalid_argument, "materialize: N must be positive");
    const std::size_t rows = static_cast<std::size_t>(K.h) * N * N;
    const std::size_t cols = static_cast<std::size_t>(K.g) * N * N;
    if (rows > max_entries / cols)
        throw Error(Errc::size_cap,
                    "materialize: " + std::to_string(rows) + " x " + std::to_string(cols) +
                        " exceeds the dense cap of " + std::to_string(max_entries) +
                        " entries; use the implicit GramOperator instead");
    const int k = K.k, off = 1 - K.m();
    const VecIndexMap out_map(N, K.h), in_map(N, K.g);
    DenseMatrix M(rows, cols);
    // Each (row, col) pair is touched by at most one tap, because the tap
    // (p, q) is determined by the spatial offset between output and input.
    for (int c = 0; c < K.h; ++c)
        for (int s = 0; s < N; ++s)
            for (int r = 0; r < N; ++r) {
                const std::size_t row = out_map.to_linear(r, s, c);
                for (int d = 0; d < K.g; ++d)
                    for (int p = 0; p < k; ++p) {
                        const int i = r + p + off;
                        if (i < 0 || i >= N) continue;
                        for (int q = 0; q < k; ++q) {
                            const int j = s + q + off;
                            if (j < 0 || j >= N) continue;
                            M.at(row, in_map.to_linear(i, j, d)) = K.at(p, q, d, c);
                        }
                    }
            }
    return M;
}

std::vector<OmegaSet> omega_enumerate(int k, int g, int h, int N) {
    if (k < 1 || g < 1 || h < 1 || N < 1)
        throw Error(Errc::invalid_argument, "omega_enumerate: dimensions must be positive");
    const int off = 1 - (k + 1) / 2;
    const VecIndexMap out_map(N, h), in_map(N, g);
    Kernel4D shape(k, g, h); // for the flat indexing only
    std::vector<OmegaSet> sets(shape.size());
    for (int y = 0; y < h; ++y)
        for (int z = 0; z < g; ++z)
            for (int q = 0; q < k; ++q)
                for (int p = 0; p < k; ++p) {
                    OmegaSet& set = sets[shape.index(p, q, z, y)];
                    set.p = p; set.q = q; set.z = z; set.y = y;
                    for (int r = 0; r < N; ++r) {
                        const int i = r + p + off;
                        if (i < 0 || i >= N) continue;
                        for (int s = 0; s < N; ++s) {
                            const int j = s + q + off;
                            if (j < 0 || j >= N) continue;
                            set.entries.emplace_back(
                                static_cast<std::int32_t>(out_map.to_linear(r, s, y)),
                                static_cast<std::int32_t>(in_map.to_linear(i, j, z)));
                        }
                    }
                }
    return sets;
}

std::vector<double> SymOp::apply(const std::vector<double>& x) const {
    if (x.size() != dim())
        throw Error(Errc::dimension_mismatch,
                    "operator apply: vector length " + std::to_string(x.size()) +
                        " does not match dimension " + std::to_string(dim()));
    std::vector<double> y(x.size());
    apply(x.data(), y.data());
    return y;
}

GramOperator::GramOperator(Kernel4D K, int N_, double alpha_)
    : kernel(std::move(K)), N(N_), alpha(alpha_) {
    kernel.validate();
    if (N < 1)
        throw Error(Errc::invalid_argument, "GramOperator: N must be positive");
    if (alpha < 0.0)
        throw Error(Errc::invalid_argument, "GramOperator: alpha must be non-negative");
}

void GramOperator::apply(const double* x, double* y) const {
    const std::size_t n = dim();
    Tensor3 X(N, kernel.g);
    std::copy(x, x + n, X.data.begin());
    const Tensor3 Z = conv_adjoint(kernel, conv_multi(kernel, X));
    for (std::size_t ell = 0; ell < n; ++ell)
        y[ell] = Z.data[ell] - alpha * x[ell];
}

} // namespace specreg
