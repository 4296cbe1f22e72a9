#include "specreg/regularizer.hpp"

#include <cmath>
#include <string>

#include "specreg/opmatrix.hpp"
#include "specreg/oracle.hpp"
#include "specreg/tensorconv.hpp"

namespace specreg {

namespace {

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

std::vector<double> matvec(const DenseMatrix& M, const std::vector<double>& x) {
    std::vector<double> y(M.rows, 0.0);
    for (std::size_t r = 0; r < M.rows; ++r) {
        double acc = 0.0;
        const double* row = M.data.data() + r * M.cols;
        for (std::size_t c = 0; c < M.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

double frobenius(const Kernel4D& K) {
    double acc = 0.0;
    for (double v : K.data) acc += v * v;
    return std::sqrt(acc);
}

void check_pair_dim(const Kernel4D& K, int N, const EigenPair& pair, const char* who) {
    const std::size_t want =
        static_cast<std::size_t>(K.g) * static_cast<std::size_t>(N) * static_cast<std::size_t>(N);
    if (pair.v.size() != want)
        throw Error(Errc::dimension_mismatch,
                    std::string(who) + ": eigenvector has " + std::to_string(pair.v.size()) +
                        " entries, operator needs " + std::to_string(want));
}

} // namespace

void DescentConfig::validate() const {
    if (!(alpha > 0.0))
        throw Error(Errc::invalid_argument, "DescentConfig: alpha must be positive");
    if (!(lr > 0.0))
        throw Error(Errc::invalid_argument, "DescentConfig: lr must be positive");
    if (iters < 0)
        throw Error(Errc::invalid_argument, "DescentConfig: iters must be non-negative");
    if (power_iters < 1)
        throw Error(Errc::invalid_argument, "DescentConfig: power_iters must be at least 1");
    if (!(init_tol > 0.0))
        throw Error(Errc::invalid_argument, "DescentConfig: init_tol must be positive");
    if (init_maxit < 1)
        throw Error(Errc::invalid_argument, "DescentConfig: init_maxit must be at least 1");
}

PenaltyResult penalty(const Kernel4D& K, int N, double alpha) {
    K.validate();
    GramOperator op(K, N, alpha);
    const auto pairs = top2_init(op, 1e-8);
    return {std::fabs(pairs.first.lambda), pairs.first.converged};
}

Kernel4D grad_direct(const Kernel4D& K, int N, double alpha, const EigenPair& pair,
                     std::size_t max_entries) {
    K.validate();
    if (!(alpha >= 0.0))
        throw Error(Errc::invalid_argument, "grad_direct: alpha must be non-negative");
    check_pair_dim(K, N, pair, "grad_direct");
    const double sgn = sign_of(pair.lambda);
    const std::size_t n = pair.v.size();
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = sgn * pair.v[i];

    const DenseMatrix M = materialize(K, N, max_entries);
    const std::vector<double> Mu = matvec(M, u);
    const std::vector<double> Mv = matvec(M, pair.v);

    const std::vector<OmegaSet> omega = omega_enumerate(K.k, K.g, K.h, N);
    Kernel4D G(K.k, K.g, K.h);
    for (std::size_t t = 0; t < omega.size(); ++t) {
        double acc = 0.0;
        for (const auto& [i, j] : omega[t].entries)
            acc += pair.v[static_cast<std::size_t>(j)] * Mu[static_cast<std::size_t>(i)] +
                   u[static_cast<std::size_t>(j)] * Mv[static_cast<std::size_t>(i)];
        G.data[t] = acc;
    }
    return G;
}

Kernel4D grad_fast(const Kernel4D& K, int N, double alpha, const EigenPair& pair) {
    K.validate();
    if (!(alpha >= 0.0))
        throw Error(Errc::invalid_argument, "grad_fast: alpha must be non-negative");
    check_pair_dim(K, N, pair, "grad_fast");
    const double sgn = sign_of(pair.lambda);
    std::vector<double> u(pair.v.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = sgn * pair.v[i];

    const Tensor3 U = unvec(u, N, K.g);
    const Tensor3 V = unvec(pair.v, N, K.g);
    const Tensor3 a = conv_multi(K, U); // unvec(M u)
    const Tensor3 b = conv_multi(K, V); // unvec(M v)

    Kernel4D G = conv_weight_grad(b, U, K.k);
    const Kernel4D G2 = conv_weight_grad(a, V, K.k);
    for (std::size_t t = 0; t < G.data.size(); ++t) G.data[t] += G2.data[t];
    return G;
}

DescentResult descend(const Kernel4D& K0, int N, const DescentConfig& config) {
    config.validate();
    K0.validate();
    if (N < 1)
        throw Error(Errc::invalid_argument, "descend: N must be positive");

    Kernel4D K = K0;
    GramOperator op(K, N, config.alpha);
    auto pairs = top2_init(op, config.init_tol, config.init_maxit, config.solver_seed);

    DescentResult out{K, {}};
    out.trace.reserve(static_cast<std::size_t>(config.iters) + 1);
    std::vector<Kernel4D> snapshots;
    if (config.record_oracle) snapshots.reserve(static_cast<std::size_t>(config.iters) + 1);

    for (int it = 0;; ++it) {
        const EigenPair& dom = pairs.first;
        const Kernel4D G = grad_fast(K, N, config.alpha, dom);

        TraceRow row;
        row.iter = it;
        row.penalty = std::fabs(dom.lambda);
        row.gap_flag =
            std::fabs(dom.lambda) - std::fabs(pairs.second.lambda) < 1e-8 * std::fabs(dom.lambda);
        row.grad_norm = frobenius(G);
        out.trace.push_back(row);
        if (config.record_oracle) snapshots.push_back(K);

        if (it == config.iters) break;

        for (std::size_t t = 0; t < K.data.size(); ++t) {
            K.data[t] -= config.lr * G.data[t];
            if (!std::isfinite(K.data[t]))
                throw Error(Errc::non_finite, "descend: non-finite kernel entry after update at iteration " +
                                                  std::to_string(it + 1));
        }
        op.kernel = K;
        try {
            pairs = top2_refine(op, std::move(pairs), config.power_iters);
        } catch (const Error& e) {
            if (e.code() != Errc::non_finite) throw;
            // finite kernel entries can still overflow the quadratic operator
            throw Error(Errc::non_finite,
                        "descend: eigenpair tracking overflowed at iteration " +
                            std::to_string(it + 1) + " (" + e.what() + ")");
        }
    }

    if (config.record_oracle) {
        for (std::size_t i = 0; i < out.trace.size(); ++i) {
            const SpectrumSummary s = spectrum_summary(snapshots[i], N, config.alpha);
            out.trace[i].sigma_max = s.sigma_max;
            out.trace[i].sigma_min = s.sigma_min;
            out.trace[i].kappa = s.kappa;
            out.trace[i].penalty_exact = s.penalty;
            out.trace[i].has_oracle = true;
        }
    }
    out.kernel = std::move(K);
    return out;
}

} // namespace specreg
