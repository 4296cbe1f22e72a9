#include "specreg/tensorconv.hpp"

#include <cstdint>
#include <string>

// Accumulation order inside every output entry is fixed (input channel,
// then kernel row, then kernel column) and builds disable FP contraction,
// so the OpenMP and serial paths produce bit-identical results.

namespace specreg {

namespace {

void check_kernel_input(const Kernel4D& K, const Tensor3& X, int want_c, const char* what) {
    K.validate();
    if (X.N < 1 || X.c < 1 ||
        X.data.size() != static_cast<std::size_t>(X.N) * X.N * X.c)
        throw Error(Errc::dimension_mismatch,
                    std::string(what) + ": tensor data length does not match declared shape");
    if (X.c != want_c)
        throw Error(Errc::channel_mismatch,
                    std::string(what) + ": expected " + std::to_string(want_c) +
                        " channels, got " + std::to_string(X.c));
}

} // namespace

DenseMatrix conv_single(const DenseMatrix& K, const DenseMatrix& X) {
    if (K.rows != K.cols || K.rows < 1 || K.data.size() != K.rows * K.cols)
        throw Error(Errc::dimension_mismatch, "conv_single: kernel must be square");
    if (X.rows != X.cols || X.rows < 1 || X.data.size() != X.rows * X.cols)
        throw Error(Errc::dimension_mismatch, "conv_single: input must be square");
    const int k = static_cast<int>(K.rows);
    const int N = static_cast<int>(X.rows);
    const int off = 1 - (k + 1) / 2;
    DenseMatrix Y(X.rows, X.cols);
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(N) * N; ++idx) {
        const int r = static_cast<int>(idx / N);
        const int s = static_cast<int>(idx % N);
        double acc = 0.0;
        for (int p = 0; p < k; ++p) {
            const int i = r + p + off;
            if (i < 0 || i >= N) continue;
            for (int q = 0; q < k; ++q) {
                const int j = s + q + off;
                if (j < 0 || j >= N) continue;
                acc += X.at(i, j) * K.at(p, q);
            }
        }
        Y.at(r, s) = acc;
    }
    return Y;
}

Tensor3 conv_multi(const Kernel4D& K, const Tensor3& X) {
    check_kernel_input(K, X, K.g, "conv_multi");
    const int N = X.N, k = K.k, g = K.g, h = K.h;
    const int off = 1 - K.m();
    Tensor3 Y(N, h);
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(N) * N * h; ++idx) {
        const int c = static_cast<int>(idx / (static_cast<std::int64_t>(N) * N));
        const int rem = static_cast<int>(idx % (static_cast<std::int64_t>(N) * N));
        const int s = rem / N;
        const int r = rem % N;
        double acc = 0.0;
        for (int d = 0; d < g; ++d)
            for (int p = 0; p < k; ++p) {
                const int i = r + p + off;
                if (i < 0 || i >= N) continue;
                for (int q = 0; q < k; ++q) {
                    const int j = s + q + off;
                    if (j < 0 || j >= N) continue;
                    acc += X.at(i, j, d) * K.at(p, q, d, c);
                }
            }
        Y.at(r, s, c) = acc;
    }
    return Y;
}

Tensor3 conv_adjoint(const Kernel4D& K, const Tensor3& Y) {
    check_kernel_input(K, Y, K.h, "conv_adjoint");
    const int N = Y.N, k = K.k, g = K.g, h = K.h;
    const int off = 1 - K.m();
    Tensor3 Z(N, g);
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(N) * N * g; ++idx) {
        const int d = static_cast<int>(idx / (static_cast<std::int64_t>(N) * N));
        const int rem = static_cast<int>(idx % (static_cast<std::int64_t>(N) * N));
        const int j = rem / N;
        const int i = rem % N;
        double acc = 0.0;
        for (int c = 0; c < h; ++c)
            for (int p = 0; p < k; ++p) {
                const int r = i - p - off;
                if (r < 0 || r >= N) continue;
                for (int q = 0; q < k; ++q) {
                    const int s = j - q - off;
                    if (s < 0 || s >= N) continue;
                    acc += Y.at(r, s, c) * K.at(p, q, d, c);
                }
            }
        Z.at(i, j, d) = acc;
    }
    return Z;
}

Kernel4D conv_weight_grad(const Tensor3& U, const Tensor3& V, int k) {
    U.validate();
    V.validate();
    if (U.N != V.N)
        throw Error(Errc::dimension_mismatch, "conv_weight_grad: spatial sizes differ");
    if (k < 1)
        throw Error(Errc::invalid_argument, "conv_weight_grad: kernel size must be positive");
    const int N = U.N, g = V.c, h = U.c;
    const int off = 1 - (k + 1) / 2;
    Kernel4D G(k, g, h);
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(G.size()); ++idx) {
        const int p = static_cast<int>(idx % k);
        const int q = static_cast<int>((idx / k) % k);
        const int z = static_cast<int>((idx / (static_cast<std::int64_t>(k) * k)) % g);
        const int y = static_cast<int>(idx / (static_cast<std::int64_t>(k) * k * g));
        double acc = 0.0;
        for (int r = 0; r < N; ++r) {
            const int i = r + p + off;
            if (i < 0 || i >= N) continue;
            for (int s = 0; s < N; ++s) {
                const int j = s + q + off;
                if (j < 0 || j >= N) continue;
                acc += U.at(r, s, y) * V.at(i, j, z);
            }
        }
        G.data[static_cast<std::size_t>(idx)] = acc;
    }
    return G;
}

namespace serial {

DenseMatrix conv_single(const DenseMatrix& K, const DenseMatrix& X) {
    if (K.rows != K.cols || K.rows < 1 || K.data.size() != K.rows * K.cols)
        throw Error(Errc::dimension_mismatch, "conv_single: kernel must be square");
    if (X.rows != X.cols || X.rows < 1 || X.data.size() != X.rows * X.cols)
        throw Error(Errc::dimension_mismatch, "conv_single: input must be square");
    const int k = static_cast<int>(K.rows);
    const int N = static_cast<int>(X.rows);
    const int off = 1 - (k + 1) / 2;
    DenseMatrix Y(X.rows, X.cols);
    for (int r = 0; r < N; ++r)
        for (int s = 0; s < N; ++s) {
            double acc = 0.0;
            for (int p = 0; p < k; ++p) {
                const int i = r + p + off;
                if (i < 0 || i >= N) continue;
                for (int q = 0; q < k; ++q) {
                    const int j = s + q + off;
                    if (j < 0 || j >= N) continue;
                    acc += X.at(i, j) * K.at(p, q);
                }
            }
            Y.at(r, s) = acc;
        }
    return Y;
}

Tensor3 conv_multi(const Kernel4D& K, const Tensor3& X) {
    check_kernel_input(K, X, K.g, "conv_multi");
    const int N = X.N, k = K.k, g = K.g, h = K.h;
    const int off = 1 - K.m();
    Tensor3 Y(N, h);
    for (int c = 0; c < h; ++c)
        for (int s = 0; s < N; ++s)
            for (int r = 0; r < N; ++r) {
                double acc = 0.0;
                for (int d = 0; d < g; ++d)
                    for (int p = 0; p < k; ++p) {
                        const int i = r + p + off;
                        if (i < 0 || i >= N) continue;
                        for (int q = 0; q < k; ++q) {
                            const int j = s + q + off;
                            if (j < 0 || j >= N) continue;
                            acc += X.at(i, j, d) * K.at(p, q, d, c);
                        }
                    }
                Y.at(r, s, c) = acc;
            }
    return Y;
}

Tensor3 conv_adjoint(const Kernel4D& K, const Tensor3& Y) {
    check_kernel_input(K, Y, K.h, "conv_adjoint");
    const int N = Y.N, k = K.k, g = K.g, h = K.h;
    const int off = 1 - K.m();
    Tensor3 Z(N, g);
    for (int d = 0; d < g; ++d)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                double acc = 0.0;
                for (int c = 0; c < h; ++c)
                    for (int p = 0; p < k; ++p) {
                        const int r = i - p - off;
                        if (r < 0 || r >= N) continue;
                        for (int q = 0; q < k; ++q) {
                            const int s = j - q - off;
                            if (s < 0 || s >= N) continue;
                            acc += Y.at(r, s, c) * K.at(p, q, d, c);
                        }
                    }
                Z.at(i, j, d) = acc;
            }
    return Z;
}

Kernel4D conv_weight_grad(const Tensor3& U, const Tensor3& V, int k) {
    U.validate();
    V.validate();
    if (U.N != V.N)
        throw Error(Errc::dimension_mismatch, "conv_weight_grad: spatial sizes differ");
    if (k < 1)
        throw Error(Errc::invalid_argument, "conv_weight_grad: kernel size must be positive");
    const int N = U.N, g = V.c, h = U.c;
    const int off = 1 - (k + 1) / 2;
    Kernel4D G(k, g, h);
    for (int y = 0; y < h; ++y)
        for (int z = 0; z < g; ++z)
            for (int q = 0; q < k; ++q)
                for (int p = 0; p < k; ++p) {
                    double acc = 0.0;
                    for (int r = 0; r < N; ++r) {
                        const int i = r + p + off;
                        if (i < 0 || i >= N) continue;
                        for (int s = 0; s < N; ++s) {
                            const int j = s + q + off;
                            if (j < 0 || j >= N) continue;
                            acc += U.at(r, s, y) * V.at(i, j, z);
                        }
                    }
                    G.at(p, q, z, y) = acc;
                }
    return G;
}

} // namespace serial

} // namespace specreg
