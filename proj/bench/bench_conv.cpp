// Timing comparison between the serial reference kernels and the
// OpenMP-parallel production kernels. The two paths are bit-identical (the
// suite asserts it); this target reports what the parallelism buys.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "specreg/opmatrix.hpp"
#include "specreg/rng.hpp"
#include "specreg/tensorconv.hpp"

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

// Repeats fn until ~0.2 s of wall time, returns seconds per call.
double time_call(const std::function<void()>& fn) {
    using clock = std::chrono::steady_clock;
    fn(); // warm up
    int reps = 1;
    for (;;) {
        const auto t0 = clock::now();
        for (int i = 0; i < reps; ++i) fn();
        const double dt = std::chrono::duration<double>(clock::now() - t0).count();
        if (dt >= 0.2 || reps >= 1 << 20) return dt / reps;
        reps *= 4;
    }
}

void bench_shape(int k, int g, int h, int N) {
    SplitMix64 rng(1);
    const Kernel4D K = random_kernel(k, g, h, rng);
    const Tensor3 X = random_tensor(N, g, rng);
    const Tensor3 Y = random_tensor(N, h, rng);
    const GramOperator op(K, N, 1.0);
    std::vector<double> x(op.dim()), y(op.dim());
    for (double& v : x) v = rng.centered();

    const double conv_par = time_call([&] { conv_multi(K, X); });
    const double conv_ser = time_call([&] { serial::conv_multi(K, X); });
    const double adj_par = time_call([&] { conv_adjoint(K, Y); });
    const double adj_ser = time_call([&] { serial::conv_adjoint(K, Y); });
    const double gram_par = time_call([&] { op.apply(x.data(), y.data()); });

    std::printf("%dx%dx%dx%d N=%-4d  conv %9.3f us (serial %9.3f, x%.2f)   adjoint %9.3f us "
                "(serial %9.3f, x%.2f)   gram apply %9.3f us\n",
                k, k, g, h, N, conv_par * 1e6, conv_ser * 1e6, conv_ser / conv_par, adj_par * 1e6,
                adj_ser * 1e6, adj_ser / adj_par, gram_par * 1e6);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run the same serial code\n");
#endif
    bench_shape(3, 3, 3, 32);
    bench_shape(3, 3, 3, 64);
    bench_shape(3, 3, 3, 128);
    bench_shape(3, 8, 8, 64);
    bench_shape(5, 4, 4, 96);
    return 0;
}
