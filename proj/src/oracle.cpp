#include "specreg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "specreg/opmatrix.hpp"

namespace specreg {

namespace {

double frob_norm(const DenseSym& S) {
    double acc = 0.0;
    for (double v : S.data) acc += v * v;
    return std::sqrt(acc);
}

// ---------------------------------------------------------------------
// Householder reduction to tridiagonal form (d, e). When `vectors` is set,
// `a` is overwritten with the accumulated orthogonal transform Q such that
// Q^T S Q is tridiagonal; otherwise `a` is scratch. Classic EISPACK-style
// formulation: e[i] couples d[i-1] and d[i], e[0] = 0.
// ---------------------------------------------------------------------
void tred2(std::vector<double>& a, std::size_t n, std::vector<double>& d,
           std::vector<double>& e, bool vectors) {
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t i = n; i-- > 1;) {
        const std::size_t l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(a[i * n + k]);
            if (scale == 0.0) {
                e[i] = a[i * n + l];
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                double f = a[i * n + l];
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    if (vectors) a[j * n + i] = a[i * n + j] / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += a[j * n + k] * a[i * n + k];
                    for (std::size_t k = j + 1; k <= l; ++k) g += a[k * n + j] * a[i * n + k];
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = a[i * n + j];
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k)
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    if (vectors) d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (vectors) {
            if (d[i] != 0.0) {
                for (std::size_t j = 0; j < i; ++j) {
                    double g = 0.0;
                    for (std::size_t k = 0; k < i; ++k) g += a[i * n + k] * a[k * n + j];
                    for (std::size_t k = 0; k < i; ++k) a[k * n + j] -= g * a[k * n + i];
                }
            }
            d[i] = a[i * n + i];
            a[i * n + i] = 1.0;
            for (std::size_t j = 0; j < i; ++j) {
                a[j * n + i] = 0.0;
                a[i * n + j] = 0.0;
            }
        } else {
            d[i] = a[i * n + i];
        }
    }
}

// ---------------------------------------------------------------------
// Implicit-shift QL on the tridiagonal (d, e); when z is non-null the
// rotations are accumulated into it (columns become eigenvectors).
// ---------------------------------------------------------------------
void tql2(std::vector<double>& d, std::vector<double>& e, std::size_t n,
          std::vector<double>* z) {
    if (n < 2) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 2.3e-16 * dd + 1e-300) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw Error(Errc::not_converged,
                                "tridiagonal QL failed to converge within 50 shifts");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                std::size_t i = m - 1;
                bool underflow = false;
                for (;; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) { // recover from a cancellation underflow
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        double* zz = z->data();
                        for (std::size_t k = 0; k < n; ++k) {
                            f = zz[k * n + i + 1];
                            zz[k * n + i + 1] = s * zz[k * n + i] + c * f;
                            zz[k * n + i] = c * zz[k * n + i] - s * f;
                        }
                    }
                    if (i == l) break;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Sort eigenvalues descending, carrying the eigenvector columns along.
void sort_pairs(std::vector<double>& d, std::vector<double>* z, std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
    std::vector<double> ds(n);
    for (std::size_t i = 0; i < n; ++i) ds[i] = d[order[i]];
    d = std::move(ds);
    if (z) {
        std::vector<double> zs(n * n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t i = 0; i < n; ++i) zs[r * n + i] = (*z)[r * n + order[i]];
        *z = std::move(zs);
    }
}

void validate_eigh(const DenseSym& S, const std::vector<double>& d,
                   const std::vector<double>& z, double tol) {
    const std::size_t n = S.n;
    const double scale = frob_norm(S);
    // residual per pair: ||S v_i - lambda_i v_i||
    std::vector<double> col(n), sv(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < n; ++r) col[r] = z[r * n + i];
        for (std::size_t r = 0; r < n; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < n; ++c) acc += S.data[r * n + c] * col[c];
            sv[r] = acc;
        }
        double res = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double t = sv[r] - d[i] * col[r];
            res += t * t;
        }
        if (std::sqrt(res) > tol * scale)
            throw Error(Errc::not_converged,
                        "eigh_dense: residual " + std::to_string(std::sqrt(res)) +
                            " exceeds tolerance for pair " + std::to_string(i));
    }
    // pairwise orthonormality
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t r = 0; r < n; ++r) acc += z[r * n + i] * z[r * n + j];
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::fabs(acc - want) > 1e-9)
                throw Error(Errc::not_converged,
                            "eigh_dense: eigenvectors " + std::to_string(i) + ", " +
                                std::to_string(j) + " are not orthonormal");
        }
}

} // namespace

DenseSym::DenseSym(std::size_t n_, std::vector<double> a) : n(n_), data(std::move(a)) {
    if (n < 1)
        throw Error(Errc::invalid_argument, "DenseSym: dimension must be positive");
    if (data.size() != n * n)
        throw Error(Errc::dimension_mismatch,
                    "DenseSym: data length does not match dimension");
    double scale = 0.0;
    for (double v : data) scale = std::max(scale, std::fabs(v));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r + 1; c < n; ++c)
            if (std::fabs(data[r * n + c] - data[c * n + r]) > 1e-12 * scale)
                throw Error(Errc::invalid_argument,
                            "DenseSym: matrix is not symmetric at (" + std::to_string(r) +
                                ", " + std::to_string(c) + ")");
}

EighResult eigh_dense(const DenseSym& S, double tol) {
    const std::size_t n = S.n;
    std::vector<double> a = S.data, d, e;
    tred2(a, n, d, e, true);
    tql2(d, e, n, &a);
    sort_pairs(d, &a, n);
    validate_eigh(S, d, a, tol);
    EighResult out;
    out.lambda = std::move(d);
    out.V.rows = n;
    out.V.cols = n;
    out.V.data = std::move(a);
    return out;
}

std::vector<double> eigvalsh_dense(const DenseSym& S) {
    const std::size_t n = S.n;
    std::vector<double> a = S.data, d, e;
    tred2(a, n, d, e, false);
    tql2(d, e, n, nullptr);
    sort_pairs(d, nullptr, n);
    return d;
}

EighResult jacobi_eigh(const DenseSym& S, int max_sweeps) {
    const std::size_t n = S.n;
    std::vector<double> a = S.data;
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    std::vector<double> d(n), b(n), zacc(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = b[i] = a[i * n + i];

    auto rotate = [&](std::vector<double>& m, std::size_t i, std::size_t j, std::size_t k,
                      std::size_t l, double s, double tau) {
        const double g = m[i * n + j];
        const double h = m[k * n + l];
        m[i * n + j] = g - s * (h + g * tau);
        m[k * n + l] = h + s * (g - h * tau);
    };

    bool done = false;
    for (int sweep = 1; sweep <= max_sweeps && !done; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::fabs(a[p * n + q]);
        if (off == 0.0) { done = true; break; }
        const double thresh = (sweep < 4) ? 0.2 * off / static_cast<double>(n * n) : 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double gmag = 100.0 * std::fabs(a[p * n + q]);
                // zero out elements that can no longer affect the diagonal
                if (sweep > 4 && std::fabs(d[p]) + gmag == std::fabs(d[p]) &&
                    std::fabs(d[q]) + gmag == std::fabs(d[q])) {
                    a[p * n + q] = 0.0;
                    continue;
                }
                if (std::fabs(a[p * n + q]) <= thresh) continue;
                double h = d[q] - d[p];
                double t;
                if (std::fabs(h) + gmag == std::fabs(h)) {
                    t = a[p * n + q] / h;
                } else {
                    const double theta = 0.5 * h / a[p * n + q];
                    t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                h = t * a[p * n + q];
                zacc[p] -= h;
                zacc[q] += h;
                d[p] -= h;
                d[q] += h;
                a[p * n + q] = 0.0;
                for (std::size_t j = 0; j < p; ++j) rotate(a, j, p, j, q, s, tau);
                for (std::size_t j = p + 1; j < q; ++j) rotate(a, p, j, j, q, s, tau);
                for (std::size_t j = q + 1; j < n; ++j) rotate(a, p, j, q, j, s, tau);
                for (std::size_t j = 0; j < n; ++j) rotate(v, j, p, j, q, s, tau);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            b[i] += zacc[i];
            d[i] = b[i];
            zacc[i] = 0.0;
        }
    }
    if (!done) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::fabs(a[p * n + q]);
        if (off != 0.0)
            throw Error(Errc::not_converged, "jacobi_eigh: sweep cap reached");
    }
    sort_pairs(d, &v, n);
    EighResult out;
    out.lambda = std::move(d);
    out.V.rows = n;
    out.V.cols = n;
    out.V.data = std::move(v);
    return out;
}

DenseSym gram(const DenseMatrix& M, bool left) {
    if (M.rows < 1 || M.cols < 1 || M.data.size() != M.rows * M.cols)
        throw Error(Errc::dimension_mismatch, "gram: malformed matrix");
    const std::size_t n = left ? M.rows : M.cols;
    const std::size_t len = left ? M.cols : M.rows;
    std::vector<double> c(n * n, 0.0);
    std::vector<std::size_t> idx;
    std::vector<double> val;
    for (std::size_t t = 0; t < len; ++t) {
        idx.clear();
        val.clear();
        for (std::size_t u = 0; u < n; ++u) {
            const double x = left ? M.at(u, t) : M.at(t, u);
            if (x != 0.0) {
                idx.push_back(u);
                val.push_back(x);
            }
        }
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a; b < idx.size(); ++b)
                c[idx[a] * n + idx[b]] += val[a] * val[b];
    }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = r + 1; s < n; ++s) c[s * n + r] = c[r * n + s];
    return DenseSym(n, std::move(c));
}

std::vector<double> singvals_dense(const DenseMatrix& M) {
    const bool left = M.rows < M.cols;
    std::vector<double> mu = eigvalsh_dense(gram(M, left));
    for (double& v : mu) v = std::sqrt(std::max(v, 0.0));
    return mu;
}

MinSideSpectrum gram_spectrum(const Kernel4D& K, int N, std::size_t max_entries) {
    const DenseMatrix M = materialize(K, N, max_entries);
    MinSideSpectrum out;
    const bool left = M.rows < M.cols; // h < g: use M M^T and pad zeros
    out.mu = eigvalsh_dense(gram(M, left));
    out.zero_pad = left ? M.cols - M.rows : 0;
    return out;
}

double dense_penalty(const Kernel4D& K, int N, double alpha, std::size_t max_entries) {
    const MinSideSpectrum sp = gram_spectrum(K, N, max_entries);
    double best = sp.zero_pad > 0 ? std::fabs(alpha) : 0.0;
    for (double mu : sp.mu) best = std::max(best, std::fabs(mu - alpha));
    return best;
}

Kernel4D fd_grad(const Kernel4D& K, int N, double alpha, double h_step) {
    K.validate();
    if (h_step <= 0.0)
        throw Error(Errc::invalid_argument, "fd_grad: step must be positive");
    Kernel4D G(K.k, K.g, K.h);
    Kernel4D probe = K;
    for (std::size_t i = 0; i < K.size(); ++i) {
        const double saved = probe.data[i];
        probe.data[i] = saved + h_step;
        const double fp = dense_penalty(probe, N, alpha);
        probe.data[i] = saved - h_step;
        const double fm = dense_penalty(probe, N, alpha);
        probe.data[i] = saved;
        G.data[i] = (fp - fm) / (2.0 * h_step);
    }
    return G;
}

} // namespace specreg
