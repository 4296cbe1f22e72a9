#include "specreg/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <utility>
#include <vector>

#include "specreg/io.hpp"
#include "specreg/opmatrix.hpp"
#include "specreg/oracle.hpp"
#include "specreg/regularizer.hpp"
#include "specreg/rng.hpp"
#include "specreg/tensorconv.hpp"

namespace specreg {

namespace {

constexpr std::size_t kDenseCap = 10000000;

// True when the full operator matrix fits under the dense-oracle entry cap.
bool dense_ok(int k, int g, int h, int N) {
    (void)k;
    const long double entries = static_cast<long double>(h) * N * N *
                                static_cast<long double>(g) * N * N;
    return entries <= static_cast<long double>(kDenseCap);
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

struct CheckState {
    std::ostream& log;
    int failures = 0;

    void pass(const std::string& name, const std::string& note = "") {
        log << "  " << name << ": ok" << (note.empty() ? "" : " (" + note + ")") << "\n";
    }
    void fail(const std::string& name, const std::string& why) {
        log << "  " << name << ": FAIL (" << why << ")\n";
        ++failures;
    }
};

void check_adjoint(const ExperimentConfig& cfg, CheckState& st) {
    const char* name = "adjoint identity";
    SplitMix64 rng(cfg.seed ^ 0xADC0FFEEULL);
    for (int trial = 0; trial < 10; ++trial) {
        Kernel4D K(cfg.k, cfg.g, cfg.h);
        for (double& v : K.data) v = rng.centered();
        const Tensor3 X = random_tensor(cfg.N, cfg.g, rng);
        const Tensor3 Y = random_tensor(cfg.N, cfg.h, rng);
        const double lhs = dot3(conv_multi(K, X), Y);
        const double rhs = dot3(X, conv_adjoint(K, Y));
        const double rel = std::fabs(lhs - rhs) / std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
        if (rel > 1e-12) {
            st.fail(name, "trial " + std::to_string(trial) + " relative error " + format_value(rel));
            return;
        }
    }
    st.pass(name);
}

void check_gradient_fd(const ExperimentConfig& cfg, CheckState& st) {
    const char* name = "gradient vs finite differences";
    if (!dense_ok(cfg.k, cfg.g, cfg.h, cfg.N)) {
        st.pass(name, "skipped: configured size exceeds the dense cap");
        return;
    }
    for (int attempt = 0; attempt < 5; ++attempt) {
        const Kernel4D K = init_uniform(cfg.k, cfg.g, cfg.h, cfg.seed + 1000 + attempt);
        GramOperator op(K, cfg.N, cfg.alpha);
        const auto pairs = top2_init(op, 1e-10, 2000);
        if (!pairs.first.converged) continue;
        if (std::fabs(pairs.first.lambda) - std::fabs(pairs.second.lambda) <= 1e-3) continue;
        const Kernel4D G = grad_fast(K, cfg.N, cfg.alpha, pairs.first);
        const std::size_t total = G.data.size();
        const std::size_t stride = std::max<std::size_t>(1, total / 12);
        const double step = 1e-6;
        for (std::size_t t = 0; t < total; t += stride) {
            Kernel4D Kp = K, Km = K;
            Kp.data[t] += step;
            Km.data[t] -= step;
            const double fd = (dense_penalty(Kp, cfg.N, cfg.alpha, kDenseCap) -
                               dense_penalty(Km, cfg.N, cfg.alpha, kDenseCap)) /
                              (2.0 * step);
            const double rel = std::fabs(fd - G.data[t]) /
                               std::max({std::fabs(fd), std::fabs(G.data[t]), 1e-6});
            if (rel > 1e-5) {
                st.fail(name, "coordinate " + std::to_string(t) + " relative error " +
                                  format_value(rel));
                return;
            }
        }
        st.pass(name);
        return;
    }
    st.pass(name, "skipped: no well-separated spectrum at the tested seeds");
}

void check_bound_window(const ExperimentConfig& cfg, CheckState& st) {
    const char* name = "spectral bound window";
    if (!dense_ok(cfg.k, cfg.g, cfg.h, cfg.N)) {
        st.pass(name, "skipped: configured size exceeds the dense cap");
        return;
    }
    const double ts[] = {0.3, 0.5, 0.9};
    // the configured kernel at the configured alpha (often vacuous)
    if (cfg.alpha > 0.0) {
        const Kernel4D K = cfg.init == InitMode::file ? kernel_read(cfg.kernel_file)
                                                      : init_uniform(cfg.k, cfg.g, cfg.h, cfg.seed);
        const SpectrumSummary s = spectrum_summary(K, cfg.N, cfg.alpha, kDenseCap);
        for (double t : ts) {
            const BoundsCheck b = check_bounds(s, cfg.alpha, t);
            if (!b.ok) {
                st.fail(name, "configured kernel violates the window at t=" + format_value(t));
                return;
            }
        }
    }
    // a non-vacuous case: near-identity kernel, alpha = 1, premise active
    if (cfg.h >= cfg.g) {
        Kernel4D D(cfg.k, cfg.g, cfg.h);
        const int m0 = D.m() - 1; // 0-based center tap
        for (int y = 0; y < cfg.h && y < cfg.g; ++y) D.at(m0, m0, y, y) = 1.0;
        SplitMix64 rng(cfg.seed ^ 0xB07D5ULL);
        for (double& v : D.data) v += 0.02 * rng.centered();
        const SpectrumSummary s = spectrum_summary(D, cfg.N, 1.0, kDenseCap);
        bool active = false;
        for (double t : ts) {
            const BoundsCheck b = check_bounds(s, 1.0, t);
            active = active || b.applicable;
            if (!b.ok) {
                st.fail(name, "perturbed identity kernel violates the window at t=" + format_value(t));
                return;
            }
        }
        st.pass(name, active ? "" : "premise inactive on all cases");
    } else {
        st.pass(name, "rank-deficient shape: premise structurally unreachable");
    }
}

void check_index_sets(const ExperimentConfig& cfg, CheckState& st) {
    const char* name = "index-set consistency";
    if (!dense_ok(cfg.k, cfg.g, cfg.h, cfg.N)) {
        st.pass(name, "skipped: configured size exceeds the dense cap");
        return;
    }
    Kernel4D K(cfg.k, cfg.g, cfg.h);
    for (std::size_t t = 0; t < K.data.size(); ++t) K.data[t] = static_cast<double>(t + 1);
    const DenseMatrix M = materialize(K, cfg.N, kDenseCap);
    const std::vector<OmegaSet> omega = omega_enumerate(cfg.k, cfg.g, cfg.h, cfg.N);
    std::vector<char> seen(M.rows * M.cols, 0);
    std::size_t marked = 0;
    for (std::size_t t = 0; t < omega.size(); ++t) {
        for (const auto& [i, j] : omega[t].entries) {
            const std::size_t flat = static_cast<std::size_t>(i) * M.cols + static_cast<std::size_t>(j);
            if (seen[flat]) {
                st.fail(name, "position (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") appears in two index sets");
                return;
            }
            seen[flat] = 1;
            ++marked;
            if (M.data[flat] != static_cast<double>(t + 1)) {
                st.fail(name, "materialized value mismatch at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
                return;
            }
        }
    }
    std::size_t nnz = 0;
    for (double v : M.data) nnz += v != 0.0;
    if (nnz != marked) {
        st.fail(name, "sets mark " + std::to_string(marked) + " positions, matrix has " +
                          std::to_string(nnz) + " nonzeros");
        return;
    }
    st.pass(name);
}

int run_check(const ExperimentConfig& cfg, std::ostream& log) {
    log << "check: k=" << cfg.k << " g=" << cfg.g << " h=" << cfg.h << " N=" << cfg.N
        << " alpha=" << format_value(cfg.alpha) << "\n";
    CheckState st{log};
    check_adjoint(cfg, st);
    check_gradient_fd(cfg, st);
    check_bound_window(cfg, st);
    check_index_sets(cfg, st);
    log << (st.failures == 0 ? "check passed\n" : "check failed\n");
    return st.failures == 0 ? 0 : 2;
}

} // namespace

void ExperimentConfig::validate() const {
    if (k < 1 || g < 1 || h < 1)
        throw Error(Errc::invalid_argument, "config: kernel dimensions must be positive");
    if (N < 1) throw Error(Errc::invalid_argument, "config: N must be positive");
    if (!(alpha >= 0.0)) throw Error(Errc::invalid_argument, "config: alpha must be non-negative");
    if (!(lr > 0.0)) throw Error(Errc::invalid_argument, "config: lr must be positive");
    if (iters < 0) throw Error(Errc::invalid_argument, "config: iters must be non-negative");
    if (power_iters < 1)
        throw Error(Errc::invalid_argument, "config: power-iters must be at least 1");
    if (init == InitMode::file && kernel_file.empty())
        throw Error(Errc::invalid_argument, "config: --init file requires --kernel-file");
    if (mode == RunMode::descend && out.empty())
        throw Error(Errc::invalid_argument, "config: descend mode requires --out");
}

Kernel4D init_uniform(int k, int g, int h, std::uint64_t seed) {
    Kernel4D K(k, g, h);
    SplitMix64 rng(seed);
    for (double& v : K.data) v = rng.uniform();
    return K;
}

void apply_preset(ExperimentConfig& cfg, const std::string& name) {
    struct Preset {
        const char* name;
        int g, h;
        double alpha;
    };
    static const Preset table[] = {
        {"example1a", 3, 1, 1.0}, {"example1b", 1, 3, 1.0},
        {"example1c", 3, 6, 1.0}, {"example1d", 6, 3, 1.0},
        {"example2a", 3, 1, 0.1}, {"example2b", 3, 1, 1.0},
        {"example2c", 3, 1, 5.0}, {"example2d", 3, 1, 10.0},
    };
    for (const Preset& p : table) {
        if (name == p.name) {
            cfg.k = 3;
            cfg.g = p.g;
            cfg.h = p.h;
            cfg.N = 15;
            cfg.alpha = p.alpha;
            cfg.lr = 0.01;
            cfg.iters = 50;
            cfg.power_iters = 2;
            cfg.seed = 1;
            cfg.init = InitMode::uniform;
            cfg.mode = RunMode::descend;
            cfg.out = name + ".csv";
            return;
        }
    }
    throw Error(Errc::invalid_argument, "unknown preset '" + name + "'");
}

std::string kernel_path_for(const std::string& out_path) {
    const std::size_t slash = out_path.find_last_of('/');
    const std::size_t dot = out_path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return out_path.substr(0, dot) + "_kernel.txt";
    return out_path + "_kernel.txt";
}

std::string format_summary(const SpectrumSummary& s) {
    return "sigma_max=" + format_value(s.sigma_max) + ", sigma_min=" + format_value(s.sigma_min) +
           ", kappa=" + format_value(s.kappa) + ", penalty=" + format_value(s.penalty);
}

int run(const ExperimentConfig& cfg, std::ostream& log) {
    cfg.validate();
    if (cfg.mode == RunMode::check) return run_check(cfg, log);

    // the kernel file, when given, dictates its own dimensions
    const Kernel4D K0 = cfg.init == InitMode::file
                            ? kernel_read(cfg.kernel_file)
                            : init_uniform(cfg.k, cfg.g, cfg.h, cfg.seed);

    if (cfg.mode == RunMode::eval) {
        log << format_summary(spectrum_summary(K0, cfg.N, cfg.alpha, kDenseCap)) << "\n";
        return 0;
    }

    DescentConfig dcfg;
    dcfg.alpha = cfg.alpha;
    dcfg.lr = cfg.lr;
    dcfg.iters = cfg.iters;
    dcfg.power_iters = cfg.power_iters;
    dcfg.record_oracle = dense_ok(K0.k, K0.g, K0.h, cfg.N);
    const DescentResult result = descend(K0, cfg.N, dcfg);

    trace_write_csv(cfg.out, result.trace);
    const std::string kpath = kernel_path_for(cfg.out);
    kernel_write(kpath, result.kernel);
    log << "wrote " << cfg.out << " (" << result.trace.size() << " rows) and " << kpath << "\n";
    return 0;
}

} // namespace specreg
