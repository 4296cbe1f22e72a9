#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "specreg/spectra.hpp"
#include "specreg/types.hpp"

namespace specreg {

enum class RunMode { descend, eval, check };
enum class InitMode { uniform, file };

// One experiment invocation, as assembled from CLI flags. Defaults match the
// smallest descent preset.
struct ExperimentConfig {
    int k = 3, g = 3, h = 1;
    int N = 15;
    double alpha = 1.0;
    double lr = 0.01;
    int iters = 50;
    int power_iters = 2;
    std::uint64_t seed = 1;
    InitMode init = InitMode::uniform;
    std::string kernel_file;       // used when init == file
    std::string out = "trace.csv"; // CSV path; kernel lands beside it
    RunMode mode = RunMode::descend;

    void validate() const; // throws Error(invalid_argument)
};

// Uniform [0,1) kernel from the pinned SplitMix64 stream, filled in storage
// order, so a seed fully determines the kernel bytes on every platform.
Kernel4D init_uniform(int k, int g, int h, std::uint64_t seed);

// Named configurations for the two experiment families: example1a..example1d
// sweep the kernel channel shapes (3x3x{3x1,1x3,3x6,6x3}, alpha=1) and
// example2a..example2d sweep alpha in {0.1, 1, 5, 10} on the 3x3x3x1 shape.
// All use N=15, lr=0.01, 50 iterations, seed 1, and set `out` to
// "<name>.csv". Unknown names throw.
void apply_preset(ExperimentConfig& cfg, const std::string& name);

// "dir/trace.csv" -> "dir/trace_kernel.txt" (extension replaced, or suffix
// appended when there is none).
std::string kernel_path_for(const std::string& out_path);

// "sigma_max=…, sigma_min=…, kappa=…, penalty=…"
std::string format_summary(const SpectrumSummary& s);

// Executes the configured mode; returns a process exit status (0 on
// success). descend writes the CSV trace and final kernel, eval prints one
// summary line, check runs the invariant suite and fails on any violation.
int run(const ExperimentConfig& cfg, std::ostream& log);

} // namespace specreg
