#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "specreg/error.hpp"
#include "specreg/opmatrix.hpp"
#include "specreg/oracle.hpp"
#include "specreg/rng.hpp"

using namespace specreg;

namespace {

DenseSym random_sym(std::size_t n, SplitMix64& rng) {
    std::vector<double> a(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c <= r; ++c) {
            const double v = rng.centered();
            a[r * n + c] = v;
            a[c * n + r] = v;
        }
    return DenseSym(n, std::move(a));
}

double fro(const DenseSym& S) {
    double acc = 0.0;
    for (double v : S.data) acc += v * v;
    return std::sqrt(acc);
}

// ||S - V diag(lambda) V^T||_F
double reconstruction_error(const DenseSym& S, const EighResult& e) {
    const std::size_t n = S.n;
    double acc = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) v += e.V.at(r, i) * e.lambda[i] * e.V.at(c, i);
            const double d = S.at(r, c) - v;
            acc += d * d;
        }
    return std::sqrt(acc);
}

} // namespace

TEST_CASE("DenseSym rejects asymmetric input") {
    std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
    CHECK_THROWS_AS(DenseSym(2, std::move(a)), Error);
}

TEST_CASE("diagonal matrices return sorted eigenvalues with axis eigenvectors") {
    std::vector<double> a(9, 0.0);
    a[0] = 3.0;
    a[4] = 1.0;
    a[8] = 2.0;
    const EighResult e = eigh_dense(DenseSym(3, std::move(a)));
    REQUIRE(e.lambda.size() == 3);
    CHECK(e.lambda[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.lambda[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e.lambda[2] == doctest::Approx(1.0).epsilon(1e-14));
    // column 0 pairs with eigenvalue 3 -> +-e_0
    CHECK(std::fabs(e.V.at(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(e.V.at(1, 0)) <= 1e-12);
    CHECK(std::fabs(e.V.at(2, 0)) <= 1e-12);
}

TEST_CASE("2x2 with known closed form") {
    const EighResult e = eigh_dense(DenseSym(2, {2.0, 1.0, 1.0, 2.0}));
    CHECK(e.lambda[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.lambda[1] == doctest::Approx(1.0).epsilon(1e-14));
    const double inv = 1.0 / std::sqrt(2.0);
    CHECK(std::fabs(e.V.at(0, 0) * e.V.at(1, 0)) == doctest::Approx(inv * inv).epsilon(1e-12));
    CHECK(e.V.at(0, 0) * e.V.at(1, 0) > 0.0);  // (1,1) direction
    CHECK(e.V.at(0, 1) * e.V.at(1, 1) < 0.0);  // (1,-1) direction
}

TEST_CASE("eigendecomposition reconstructs the matrix across sizes") {
    SplitMix64 rng(101);
    for (std::size_t n : {5, 40, 225}) {
        const DenseSym S = random_sym(n, rng);
        const EighResult e = eigh_dense(S);
        CHECK(std::is_sorted(e.lambda.rbegin(), e.lambda.rend()));
        CHECK(reconstruction_error(S, e) <= 1e-8 * fro(S));
    }
}

TEST_CASE("large case: n = 700 stays within the residual contract") {
    SplitMix64 rng(103);
    const DenseSym S = random_sym(700, rng);
    const EighResult e = eigh_dense(S); // internal per-pair residual checks throw on failure
    CHECK(e.lambda.size() == 700);
    CHECK(std::is_sorted(e.lambda.rbegin(), e.lambda.rend()));
    // spot-check reconstruction on a random slice of rows
    const std::size_t n = 700;
    double acc = 0.0, ref = 0.0;
    for (std::size_t r = 0; r < n; r += 97)
        for (std::size_t c = 0; c < n; ++c) {
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) v += e.V.at(r, i) * e.lambda[i] * e.V.at(c, i);
            const double d = S.at(r, c) - v;
            acc += d * d;
            ref += S.at(r, c) * S.at(r, c);
        }
    CHECK(std::sqrt(acc) <= 1e-8 * std::max(1.0, std::sqrt(ref)));
}

TEST_CASE("eigenvalues-only path agrees with the full decomposition") {
    SplitMix64 rng(107);
    const DenseSym S = random_sym(90, rng);
    const EighResult e = eigh_dense(S);
    const std::vector<double> l = eigvalsh_dense(S);
    REQUIRE(l.size() == e.lambda.size());
    double scale = 1.0;
    for (double v : l) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < l.size(); ++i)
        CHECK(std::fabs(l[i] - e.lambda[i]) <= 1e-10 * scale);
}

TEST_CASE("independently coded Jacobi solver cross-checks the QL solver") {
    SplitMix64 rng(109);
    for (std::size_t n : {7, 60, 150}) {
        const DenseSym S = random_sym(n, rng);
        const EighResult ql = eigh_dense(S);
        const EighResult ja = jacobi_eigh(S);
        double scale = 1.0;
        for (double v : ql.lambda) scale = std::max(scale, std::fabs(v));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::fabs(ql.lambda[i] - ja.lambda[i]) <= 1e-10 * scale);
        CHECK(reconstruction_error(S, ja) <= 1e-8 * fro(S));
    }
}

TEST_CASE("singular values of a stacked diagonal") {
    // M = [[2,0],[0,1],[0,0]]: singular values are exactly {2, 1}.
    DenseMatrix M(3, 2);
    M.at(0, 0) = 2.0;
    M.at(1, 1) = 1.0;
    const std::vector<double> s = singvals_dense(M);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("both Gram sides carry the same nonzero spectrum") {
    SplitMix64 rng(113);
    DenseMatrix M(8, 12);
    for (double& v : M.data) v = rng.centered();
    const std::vector<double> left = eigvalsh_dense(gram(M, true));   // 8 values
    const std::vector<double> right = eigvalsh_dense(gram(M, false)); // 12 values
    double scale = 1.0;
    for (double v : left) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < left.size(); ++i)
        CHECK(std::fabs(left[i] - right[i]) <= 1e-10 * scale);
    for (std::size_t i = left.size(); i < right.size(); ++i)
        CHECK(std::fabs(right[i]) <= 1e-10 * scale);

    // and singvals_dense matches the root of the left spectrum
    const std::vector<double> s = singvals_dense(M);
    REQUIRE(s.size() == 8);
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(s[i] == doctest::Approx(std::sqrt(std::max(0.0, left[i]))).epsilon(1e-10));
}

TEST_CASE("gram_spectrum reports the structural zero padding") {
    // k=1, g=2, h=1, kernel [a, b]: M = [aI | bI], M M^T = (a^2+b^2) I.
    Kernel4D K(1, 2, 1);
    K.at(0, 0, 0, 0) = 0.6;
    K.at(0, 0, 1, 0) = 0.8;
    const int N = 3;
    const MinSideSpectrum sp = gram_spectrum(K, N);
    REQUIRE(sp.mu.size() == static_cast<std::size_t>(N) * N);
    CHECK(sp.zero_pad == static_cast<std::size_t>(N) * N);
    for (double mu : sp.mu) CHECK(mu == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dense penalty has the closed form max(|mu - alpha|, alpha) here") {
    Kernel4D K(1, 2, 1);
    K.at(0, 0, 0, 0) = 0.6;
    K.at(0, 0, 1, 0) = 0.8;
    CHECK(dense_penalty(K, 3, 0.25) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(dense_penalty(K, 3, 2.0) == doctest::Approx(2.0).epsilon(1e-12)); // zero side wins
}

TEST_CASE("finite differences recover the one-channel derivative") {
    // k=1, g=h=1, kernel value c: penalty = |c^2 - alpha|, derivative
    // 2c sign(c^2 - alpha). At c=2, alpha=1: derivative 4.
    Kernel4D K(1, 1, 1);
    K.at(0, 0, 0, 0) = 2.0;
    const Kernel4D G = fd_grad(K, 3, 1.0);
    REQUIRE(G.data.size() == 1);
    CHECK(G.data[0] == doctest::Approx(4.0).epsilon(1e-8));

    // halving the step should not move the estimate at first order
    const Kernel4D G2 = fd_grad(K, 3, 1.0, 5e-7);
    CHECK(std::fabs(G2.data[0] - G.data[0]) <= 1e-6);
}
