#pragma once

#include <cstddef>
#include <vector>

#include "specreg/error.hpp"

namespace specreg {

// 4-D convolution kernel of shape k x k x g x h: spatial taps (p, q),
// input channel z, output channel y. Storage order is p fastest, then q,
// then z, then y — the same order as the on-disk kernel format, so file
// I/O and seeded initialization are straight copies.
struct Kernel4D {
    int k = 0;
    int g = 0;
    int h = 0;
    std::vector<double> data;

    Kernel4D() = default;
    Kernel4D(int k_, int g_, int h_);

    std::size_t size() const { return data.size(); }

    std::size_t index(int p, int q, int z, int y) const {
        return static_cast<std::size_t>(p) +
               static_cast<std::size_t>(k) * (static_cast<std::size_t>(q) +
               static_cast<std::size_t>(k) * (static_cast<std::size_t>(z) +
               static_cast<std::size_t>(g) * static_cast<std::size_t>(y)));
    }

    double& at(int p, int q, int z, int y) { return data[index(p, q, z, y)]; }
    double at(int p, int q, int z, int y) const { return data[index(p, q, z, y)]; }

    // Padding center ceil(k/2), expressed 1-based as in the defining sum.
    int m() const { return (k + 1) / 2; }

    // Throws on inconsistent dims, wrong data length, or non-finite entries.
    void validate() const;
};

// N x N x c feature map. Storage order matches vec(): row index i fastest
// (a column is contiguous), then column j, then channel d.
struct Tensor3 {
    int N = 0;
    int c = 0;
    std::vector<double> data;

    Tensor3() = default;
    Tensor3(int N_, int c_);

    std::size_t size() const { return data.size(); }

    std::size_t index(int i, int j, int d) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(N) * (static_cast<std::size_t>(j) +
               static_cast<std::size_t>(N) * static_cast<std::size_t>(d));
    }

    double& at(int i, int j, int d) { return data[index(i, j, d)]; }
    double at(int i, int j, int d) const { return data[index(i, j, d)]; }

    void validate() const;
};

// Plain row-major dense matrix. Used by the brute-force reference paths and
// for 2-D kernels/inputs of the one-channel convolution.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

} // namespace specreg
