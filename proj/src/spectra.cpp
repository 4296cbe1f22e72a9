#include "specreg/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specreg/oracle.hpp"
#include "specreg/rng.hpp"

namespace specreg {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void scal(std::vector<double>& a, double s) {
    for (double& v : a) v *= s;
}

// y += s * x
void axpy(std::vector<double>& y, double s, const std::vector<double>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

std::vector<double> combine(double c0, const std::vector<double>& a, double c1,
                            const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c0 * a[i] + c1 * b[i];
    return out;
}

// Flip so that the entry of largest magnitude is positive; keeps repeated
// runs and the fixed-point property deterministic.
void canonical_sign(std::vector<double>& v) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::fabs(v[i]) > best) {
            best = std::fabs(v[i]);
            arg = i;
        }
    if (v[arg] < 0.0)
        for (double& x : v) x = -x;
}

std::vector<double> random_unit(std::size_t n, SplitMix64& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.centered();
    const double nr = nrm2(v);
    if (nr > 0.0) scal(v, 1.0 / nr);
    return v;
}

// Orthonormalize (w0, w1) in place by modified Gram-Schmidt; degenerate
// directions are replaced by fresh random vectors so the basis never
// collapses (relevant when the operator is rank-deficient). Redraws are
// capped: a basis that stays degenerate after fresh random draws means the
// vectors carry non-finite values, and retrying cannot recover.
void orthonormalize(std::vector<double>& w0, std::vector<double>& w1, SplitMix64& rng) {
    constexpr int kMaxRedraws = 64;
    double n0 = nrm2(w0);
    for (int tries = 0; !(n0 > 1e-300); ++tries) {
        if (tries >= kMaxRedraws)
            throw Error(Errc::non_finite, "orthonormalize: basis vector is not normalizable");
        w0 = random_unit(w0.size(), rng);
        n0 = nrm2(w0);
    }
    scal(w0, 1.0 / n0);
    for (int tries = 0;; ++tries) {
        const double proj = dot(w0, w1);
        axpy(w1, -proj, w0);
        const double n1 = nrm2(w1);
        // relative check: w1 must keep a component genuinely outside w0
        if (n1 > 1e-14 * std::max(1.0, std::fabs(proj))) {
            scal(w1, 1.0 / n1);
            return;
        }
        if (tries >= kMaxRedraws)
            throw Error(Errc::non_finite, "orthonormalize: basis vector is not normalizable");
        w1 = random_unit(w1.size(), rng);
    }
}

struct Eig2 {
    double l1, l2;     // ranked |l1| >= |l2|
    double s1[2], s2[2];
};

// Symmetric 2x2 eigendecomposition [[b00, b01], [b01, b11]], ranked by
// magnitude. The eigenvectors are exactly orthonormal by construction.
Eig2 eig2x2(double b00, double b01, double b11) {
    Eig2 out;
    const double mean = 0.5 * (b00 + b11);
    const double disc = std::hypot(0.5 * (b00 - b11), b01);
    double la = mean + disc, lb = mean - disc;
    double va[2], vb[2];
    if (disc <= 1e-300) { // equal eigenvalues: any orthonormal basis works
        va[0] = 1.0; va[1] = 0.0;
    } else {
        // pick the better-conditioned expression for the eigenvector of la
        const double r0 = la - b00, r1 = la - b11;
        if (std::fabs(r1) >= std::fabs(r0)) {
            va[0] = r1; va[1] = b01;
        } else {
            va[0] = b01; va[1] = r0;
        }
        const double nr = std::hypot(va[0], va[1]);
        if (nr == 0.0) { va[0] = 1.0; va[1] = 0.0; }
        else { va[0] /= nr; va[1] /= nr; }
    }
    vb[0] = -va[1];
    vb[1] = va[0];
    if (std::fabs(lb) > std::fabs(la)) {
        out.l1 = lb; out.s1[0] = vb[0]; out.s1[1] = vb[1];
        out.l2 = la; out.s2[0] = va[0]; out.s2[1] = va[1];
    } else {
        out.l1 = la; out.s1[0] = va[0]; out.s1[1] = va[1];
        out.l2 = lb; out.s2[0] = vb[0]; out.s2[1] = vb[1];
    }
    return out;
}

struct StepResult {
    EigenPair p1, p2;
    std::vector<double> a1, a2; // A * ritz vector, for the next basis
};

// One block step: apply the operator to the orthonormal basis, extract the
// two Ritz pairs, rank them by |lambda|, and report residuals.
StepResult ritz_step(const SymOp& op, const std::vector<double>& v0,
                     const std::vector<double>& v1) {
    const std::vector<double> z0 = op.apply(v0);
    const std::vector<double> z1 = op.apply(v1);
    const double b00 = dot(v0, z0);
    const double b11 = dot(v1, z1);
    const double b01 = 0.5 * (dot(v0, z1) + dot(v1, z0));
    if (!std::isfinite(b00) || !std::isfinite(b01) || !std::isfinite(b11))
        throw Error(Errc::non_finite, "subspace iteration: operator produced non-finite values");
    const Eig2 e = eig2x2(b00, b01, b11);

    StepResult out;
    auto build = [&](double lambda, const double* s, EigenPair& pair,
                     std::vector<double>& av) {
        pair.lambda = lambda;
        pair.v = combine(s[0], v0, s[1], v1);
        const double nv = nrm2(pair.v);
        if (nv > 0.0) scal(pair.v, 1.0 / nv);
        av = combine(s[0], z0, s[1], z1);
        if (nv > 0.0 && nv != 1.0) scal(av, 1.0 / nv);
        std::vector<double> r = av;
        axpy(r, -lambda, pair.v);
        pair.residual = nrm2(r);
    };
    build(e.l1, e.s1, out.p1, out.a1);
    build(e.l2, e.s2, out.p2, out.a2);
    canonical_sign(out.p1.v);
    canonical_sign(out.p2.v);
    return out;
}

// Residuals are judged against |l1|: the pair converges as a unit only when
// both Ritz vectors settle, but each pair also carries its own flag so a
// dominant pair that has long converged is not reported as unsettled just
// because the runner-up sits on a near-tie.
void flag_converged(StepResult& st, double tol) {
    const double bound = tol * std::fabs(st.p1.lambda);
    st.p1.converged = st.p1.residual <= bound;
    st.p2.converged = st.p2.residual <= bound;
}

} // namespace

std::pair<EigenPair, EigenPair> top2_init(const SymOp& op, double tol, int maxit,
                                          std::uint64_t seed) {
    const std::size_t n = op.dim();
    if (n < 2)
        throw Error(Errc::invalid_argument,
                    "top2_init: operator dimension must be at least 2");
    if (tol < 0.0 || maxit < 1)
        throw Error(Errc::invalid_argument, "top2_init: bad tolerance or iteration cap");
    SplitMix64 rng(seed);
    // v0 is drawn completely before v1 — pinned so results are reproducible
    std::vector<double> v0(n), v1(n);
    for (double& x : v0) x = rng.centered();
    for (double& x : v1) x = rng.centered();
    orthonormalize(v0, v1, rng);

    StepResult st;
    for (int it = 0; it < maxit; ++it) {
        st = ritz_step(op, v0, v1);
        flag_converged(st, tol);
        if (st.p1.converged && st.p2.converged)
            return {std::move(st.p1), std::move(st.p2)};
        v0 = std::move(st.a1);
        v1 = std::move(st.a2);
        orthonormalize(v0, v1, rng);
    }
    // out of iterations: the flags report each pair's own state
    return {std::move(st.p1), std::move(st.p2)};
}

std::pair<EigenPair, EigenPair> top2_refine(const SymOp& op,
                                            std::pair<EigenPair, EigenPair> pairs,
                                            int iters) {
    const std::size_t n = op.dim();
    if (iters < 1)
        throw Error(Errc::invalid_argument, "top2_refine: iters must be at least 1");
    if (pairs.first.v.size() != n || pairs.second.v.size() != n)
        throw Error(Errc::dimension_mismatch, "top2_refine: vector length mismatch");
    SplitMix64 rng(0x9E3779B97F4A7C15ULL); // only consulted on degenerate bases
    std::vector<double> v0 = std::move(pairs.first.v);
    std::vector<double> v1 = std::move(pairs.second.v);
    orthonormalize(v0, v1, rng);
    StepResult st;
    for (int it = 0; it < iters; ++it) {
        st = ritz_step(op, v0, v1);
        if (it + 1 < iters) {
            v0 = std::move(st.a1);
            v1 = std::move(st.a2);
            orthonormalize(v0, v1, rng);
        }
    }
    st.p1.converged = st.p1.residual <= 1e-8 * std::fabs(st.p1.lambda);
    st.p2.converged = st.p2.residual <= 1e-8 * std::fabs(st.p1.lambda);
    return {std::move(st.p1), std::move(st.p2)};
}

SpectrumSummary spectrum_summary(const Kernel4D& K, int N, double alpha,
                                 std::size_t max_entries) {
    if (alpha < 0.0)
        throw Error(Errc::invalid_argument, "spectrum_summary: alpha must be non-negative");
    const MinSideSpectrum sp = gram_spectrum(K, N, max_entries);
    SpectrumSummary out;
    out.sigma_max = std::sqrt(std::max(sp.mu.front(), 0.0));
    out.sigma_min = std::sqrt(std::max(sp.mu.back(), 0.0));
    out.kappa = out.sigma_min > 0.0 ? out.sigma_max / out.sigma_min
                                    : std::numeric_limits<double>::infinity();
    // top two of |mu - alpha| over the full gN^2-side spectrum: the min-side
    // eigenvalues plus the structural zeros contributed when h < g
    double best = 0.0, second = 0.0;
    std::size_t count = 0;
    auto feed = [&](double value) {
        ++count;
        if (value > best) {
            second = best;
            best = value;
        } else if (value > second) {
            second = value;
        }
    };
    for (double mu : sp.mu) feed(std::fabs(mu - alpha));
    for (std::size_t i = 0; i < std::min<std::size_t>(sp.zero_pad, 2); ++i) feed(alpha);
    out.penalty = best;
    out.gap = count >= 2 ? best - second : 0.0;
    return out;
}

BoundsCheck check_bounds(const SpectrumSummary& summary, double alpha, double t) {
    if (!(t > 0.0) || !(t <= 1.0))
        throw Error(Errc::invalid_argument, "check_bounds: t must lie in (0, 1]");
    if (!(alpha > 0.0))
        throw Error(Errc::invalid_argument, "check_bounds: alpha must be positive");
    BoundsCheck out;
    out.applicable = summary.penalty < t * alpha;
    if (!out.applicable) return out; // vacuously true
    const double lo = std::sqrt((1.0 - t) * alpha);
    const double hi = std::sqrt((1.0 + t) * alpha);
    const double kappa_bound = std::sqrt((1.0 + t) / (1.0 - t));
    out.ok = lo < summary.sigma_min && summary.sigma_min <= summary.sigma_max &&
             summary.sigma_max < hi && summary.kappa < kappa_bound;
    return out;
}

} // namespace specreg
