#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <vector>

#include "specreg/error.hpp"
#include "specreg/rng.hpp"
#include "specreg/tensorconv.hpp"
#include "specreg/types.hpp"

using namespace specreg;

namespace {

Kernel4D random_kernel(int k, int g, int h, SplitMix64& rng) {
    Kernel4D K(k, g, h);
    for (double& v : K.data) v = rng.centered();
    return K;
}

Tensor3 random_tensor(int N, int c, SplitMix64& rng) {
    Tensor3 t(N, c);
    for (double& v : t.data) v = rng.centered();
    return t;
}

double dot3(const Tensor3& a, const Tensor3& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
    return acc;
}

double dotk(const Kernel4D& a, const Kernel4D& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
    return acc;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

// Independent evaluation of the defining sum, written 1-based exactly as the
// definition reads: y_{r,s,c} = sum_{p,q,d} x_{r-m+p, s-m+q, d} k_{p,q,d,c}.
Tensor3 naive_conv(const Kernel4D& K, const Tensor3& X) {
    const int N = X.N, m = K.m();
    Tensor3 Y(N, K.h);
    for (int c = 1; c <= K.h; ++c)
        for (int s = 1; s <= N; ++s)
            for (int r = 1; r <= N; ++r) {
                double acc = 0.0;
                for (int d = 1; d <= K.g; ++d)
                    for (int q = 1; q <= K.k; ++q)
                        for (int p = 1; p <= K.k; ++p) {
                            const int i = r - m + p, j = s - m + q;
                            if (i < 1 || i > N || j < 1 || j > N) continue;
                            acc += X.at(i - 1, j - 1, d - 1) * K.at(p - 1, q - 1, d - 1, c - 1);
                        }
                Y.at(r - 1, s - 1, c - 1) = acc;
            }
    return Y;
}

// Same independence for the weight gradient: G(p,q,z,y) = sum_{r,s} U(r,s,y)
// * V(r-m+p, s-m+q, z), out-of-range V treated as zero.
Kernel4D naive_weight_grad(const Tensor3& U, const Tensor3& V, int k) {
    const int N = U.N, m = (k + 1) / 2;
    Kernel4D G(k, V.c, U.c);
    for (int y = 1; y <= U.c; ++y)
        for (int z = 1; z <= V.c; ++z)
            for (int q = 1; q <= k; ++q)
                for (int p = 1; p <= k; ++p) {
                    double acc = 0.0;
                    for (int s = 1; s <= N; ++s)
                        for (int r = 1; r <= N; ++r) {
                            const int i = r - m + p, j = s - m + q;
                            if (i < 1 || i > N || j < 1 || j > N) continue;
                            acc += U.at(r - 1, s - 1, y - 1) * V.at(i - 1, j - 1, z - 1);
                        }
                    G.at(p - 1, q - 1, z - 1, y - 1) = acc;
                }
    return G;
}

} // namespace

TEST_CASE("1x1 kernel scales the input") {
    DenseMatrix K(1, 1);
    K.at(0, 0) = 2.5;
    DenseMatrix X(3, 3);
    for (int i = 0; i < 9; ++i) X.data[i] = i - 4;
    const DenseMatrix Y = conv_single(K, X);
    for (int i = 0; i < 9; ++i) CHECK(Y.data[i] == 2.5 * X.data[i]);
}

TEST_CASE("centered delta kernel is the identity") {
    Kernel4D K(3, 1, 1);
    K.at(1, 1, 0, 0) = 1.0; // center tap, 0-based (m-1, m-1)
    SplitMix64 rng(7);
    const Tensor3 X = random_tensor(5, 1, rng);
    const Tensor3 Y = conv_multi(K, X);
    CHECK(max_abs_diff(Y.data, X.data) == 0.0);
}

TEST_CASE("offset delta kernel shifts the input with zero fill") {
    // tap (p,q) = (3,2) 1-based: y_{r,s} = x_{r+1,s}
    Kernel4D K(3, 1, 1);
    K.at(2, 1, 0, 0) = 1.0;
    Tensor3 X(3, 1);
    for (int i = 0; i < 9; ++i) X.data[i] = i + 1;
    const Tensor3 Y = conv_multi(K, X);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            CHECK(Y.at(i, j, 0) == (i + 1 < 3 ? X.at(i + 1, j, 0) : 0.0));
}

TEST_CASE("even k uses the asymmetric center ceil(k/2)") {
    // k = 2: m = 1, taps (p,q) in {1,2}^2 reach x_{r-1+p, s-1+q}; the (1,1)
    // tap is the identity and (2,2) reads the down-right neighbor.
    Kernel4D K(2, 1, 1);
    K.at(0, 0, 0, 0) = 1.0;
    SplitMix64 rng(9);
    const Tensor3 X = random_tensor(4, 1, rng);
    CHECK(max_abs_diff(conv_multi(K, X).data, X.data) == 0.0);

    Kernel4D K2(2, 1, 1);
    K2.at(1, 1, 0, 0) = 1.0;
    const Tensor3 Y = conv_multi(K2, X);
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i)
            CHECK(Y.at(i, j, 0) == (i + 1 < 4 && j + 1 < 4 ? X.at(i + 1, j + 1, 0) : 0.0));
}

TEST_CASE("conv_multi matches an independently coded defining sum") {
    SplitMix64 rng(11);
    const int shapes[][4] = {{3, 2, 2, 4}, {2, 1, 3, 5}, {3, 3, 1, 4}, {1, 2, 2, 3}, {5, 1, 1, 6}};
    for (const auto& s : shapes) {
        const Kernel4D K = random_kernel(s[0], s[1], s[2], rng);
        const Tensor3 X = random_tensor(s[3], s[1], rng);
        const Tensor3 got = conv_multi(K, X);
        const Tensor3 want = naive_conv(K, X);
        CHECK(max_abs_diff(got.data, want.data) <= 1e-13);
    }
}

TEST_CASE("conv_multi is linear in the input") {
    SplitMix64 rng(13);
    const Kernel4D K = random_kernel(3, 2, 3, rng);
    const Tensor3 X = random_tensor(5, 2, rng);
    const Tensor3 Y = random_tensor(5, 2, rng);
    Tensor3 Z(5, 2);
    const double a = 1.75, b = -0.5;
    for (std::size_t i = 0; i < Z.data.size(); ++i) Z.data[i] = a * X.data[i] + b * Y.data[i];
    const Tensor3 lhs = conv_multi(K, Z);
    const Tensor3 cx = conv_multi(K, X), cy = conv_multi(K, Y);
    for (std::size_t i = 0; i < lhs.data.size(); ++i)
        CHECK(lhs.data[i] == doctest::Approx(a * cx.data[i] + b * cy.data[i]).epsilon(1e-12));
}

TEST_CASE("conv_adjoint satisfies the inner-product identity") {
    SplitMix64 rng(17);
    const int shapes[][4] = {{3, 2, 2, 4}, {2, 3, 1, 5}, {4, 1, 2, 6}, {3, 3, 3, 3}};
    for (const auto& s : shapes) {
        for (int trial = 0; trial < 5; ++trial) {
            const Kernel4D K = random_kernel(s[0], s[1], s[2], rng);
            const Tensor3 X = random_tensor(s[3], s[1], rng);
            const Tensor3 Y = random_tensor(s[3], s[2], rng);
            const double lhs = dot3(conv_multi(K, X), Y);
            const double rhs = dot3(X, conv_adjoint(K, Y));
            CHECK(std::fabs(lhs - rhs) <=
                  1e-12 * std::max({std::fabs(lhs), std::fabs(rhs), 1.0}));
        }
    }
}

TEST_CASE("conv_weight_grad matches the defining sum and its pairing identity") {
    SplitMix64 rng(19);
    const int shapes[][4] = {{3, 2, 2, 4}, {2, 1, 3, 5}, {3, 3, 1, 4}};
    for (const auto& s : shapes) {
        const int k = s[0], g = s[1], h = s[2], N = s[3];
        const Tensor3 U = random_tensor(N, h, rng);
        const Tensor3 V = random_tensor(N, g, rng);
        const Kernel4D got = conv_weight_grad(U, V, k);
        const Kernel4D want = naive_weight_grad(U, V, k);
        CHECK(max_abs_diff(got.data, want.data) <= 1e-13);

        // <G, K> = <U, conv_multi(K, V)> for every K: the weight gradient is
        // the adjoint of K -> conv_multi(K, V) against the output slot.
        const Kernel4D K = random_kernel(k, g, h, rng);
        const double lhs = dotk(got, K);
        const double rhs = dot3(U, conv_multi(K, V));
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max({std::fabs(lhs), std::fabs(rhs), 1.0}));
    }
}

TEST_CASE("serial and parallel paths agree bitwise") {
    SplitMix64 rng(23);
    const int shapes[][4] = {{3, 2, 3, 7}, {2, 3, 1, 6}, {5, 2, 2, 9}};
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(3);
#endif
    for (const auto& s : shapes) {
        const Kernel4D K = random_kernel(s[0], s[1], s[2], rng);
        const Tensor3 X = random_tensor(s[3], s[1], rng);
        const Tensor3 Y = random_tensor(s[3], s[2], rng);

        const Tensor3 f1 = conv_multi(K, X), f2 = serial::conv_multi(K, X);
        CHECK(f1.data == f2.data);

        const Tensor3 a1 = conv_adjoint(K, Y), a2 = serial::conv_adjoint(K, Y);
        CHECK(a1.data == a2.data);

        const Kernel4D g1 = conv_weight_grad(Y, X, s[0]);
        const Kernel4D g2 = serial::conv_weight_grad(Y, X, s[0]);
        CHECK(g1.data == g2.data);
    }
#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif
}

TEST_CASE("channel mismatches are rejected") {
    const Kernel4D K(3, 2, 2);
    const Tensor3 wrong(4, 3);
    CHECK_THROWS_AS(conv_multi(K, wrong), Error);
    try {
        conv_multi(K, wrong);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::channel_mismatch);
    }
    CHECK_THROWS_AS(conv_adjoint(K, wrong), Error);
}
