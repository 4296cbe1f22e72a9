#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "specreg/error.hpp"
#include "specreg/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral regularization of multichannel convolution kernels"};
    app.set_help_flag("--help", "print usage"); // frees -h/--h for the channel flag

    specreg::ExperimentConfig cfg;
    int k = cfg.k, g = cfg.g, h = cfg.h, N = cfg.N;
    int iters = cfg.iters, power_iters = cfg.power_iters;
    double alpha = cfg.alpha, lr = cfg.lr;
    std::uint64_t seed = cfg.seed;
    std::string init = "uniform", mode = "descend", out = cfg.out;
    std::string kernel_file, preset;

    auto* o_k = app.add_option("--k", k, "kernel spatial size (k x k taps)");
    auto* o_g = app.add_option("--g", g, "input channels");
    auto* o_h = app.add_option("--h", h, "output channels");
    auto* o_N = app.add_option("--N", N, "input grid size (N x N per channel)");
    auto* o_alpha = app.add_option("--alpha", alpha, "spectral shift");
    auto* o_lr = app.add_option("--lr", lr, "learning rate");
    auto* o_iters = app.add_option("--iters", iters, "descent iterations");
    auto* o_power = app.add_option("--power-iters", power_iters, "refine steps per iteration");
    auto* o_seed = app.add_option("--seed", seed, "RNG seed for kernel initialization");
    auto* o_init = app.add_option("--init", init, "kernel source: uniform | file")
                       ->check(CLI::IsMember({"uniform", "file"}));
    auto* o_kfile = app.add_option("--kernel-file", kernel_file, "kernel path for --init file");
    auto* o_out = app.add_option("--out", out, "trace CSV path (kernel written beside it)");
    auto* o_mode = app.add_option("--mode", mode, "descend | eval | check")
                       ->check(CLI::IsMember({"descend", "eval", "check"}));
    app.add_option("--preset", preset,
                   "named configuration example1a..example1d / example2a..example2d; "
                   "explicit flags override preset values");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!preset.empty()) specreg::apply_preset(cfg, preset);
        if (o_k->count()) cfg.k = k;
        if (o_g->count()) cfg.g = g;
        if (o_h->count()) cfg.h = h;
        if (o_N->count()) cfg.N = N;
        if (o_alpha->count()) cfg.alpha = alpha;
        if (o_lr->count()) cfg.lr = lr;
        if (o_iters->count()) cfg.iters = iters;
        if (o_power->count()) cfg.power_iters = power_iters;
        if (o_seed->count()) cfg.seed = seed;
        if (o_init->count())
            cfg.init = init == "file" ? specreg::InitMode::file : specreg::InitMode::uniform;
        if (o_kfile->count()) cfg.kernel_file = kernel_file;
        if (o_out->count()) cfg.out = out;
        if (o_mode->count()) {
            if (mode == "descend") cfg.mode = specreg::RunMode::descend;
            else if (mode == "eval") cfg.mode = specreg::RunMode::eval;
            else cfg.mode = specreg::RunMode::check;
        }
        return specreg::run(cfg, std::cout);
    } catch (const specreg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
