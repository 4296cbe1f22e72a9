#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "specreg/error.hpp"
#include "specreg/experiment.hpp"
#include "specreg/io.hpp"

using namespace specreg;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/specreg_exp_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("uniform initialization is the pinned generator stream in storage order") {
    const Kernel4D K = init_uniform(1, 2, 3, 1);
    REQUIRE(K.data.size() == 6);
    const double expected[6] = {
        0.5665615751722809,  0.74578175726270113, 0.97100275358679622,
        0.44435921705577208, 0.44426470082635805, 0.76289439191176101,
    };
    for (int i = 0; i < 6; ++i) CHECK(K.data[i] == expected[i]);

    const Kernel4D again = init_uniform(1, 2, 3, 1);
    CHECK(again.data == K.data);
    const Kernel4D other = init_uniform(1, 2, 3, 2);
    CHECK(other.data != K.data);
}

TEST_CASE("presets pin the experiment grid") {
    ExperimentConfig cfg;
    apply_preset(cfg, "example1c");
    CHECK(cfg.k == 3);
    CHECK(cfg.g == 3);
    CHECK(cfg.h == 6);
    CHECK(cfg.N == 15);
    CHECK(cfg.alpha == 1.0);
    CHECK(cfg.lr == 0.01);
    CHECK(cfg.iters == 50);
    CHECK(cfg.seed == 1);
    CHECK(cfg.out == "example1c.csv");
    CHECK(cfg.mode == RunMode::descend);

    apply_preset(cfg, "example1b");
    CHECK(cfg.g == 1);
    CHECK(cfg.h == 3);

    apply_preset(cfg, "example2d");
    CHECK(cfg.g == 3);
    CHECK(cfg.h == 1);
    CHECK(cfg.alpha == 10.0);

    apply_preset(cfg, "example2a");
    CHECK(cfg.alpha == 0.1);

    CHECK_THROWS_AS(apply_preset(cfg, "example3z"), Error);
}

TEST_CASE("kernel path derivation") {
    CHECK(kernel_path_for("trace.csv") == "trace_kernel.txt");
    CHECK(kernel_path_for("out/run.csv") == "out/run_kernel.txt");
    CHECK(kernel_path_for("archive.tar/trace") == "archive.tar/trace_kernel.txt");
    CHECK(kernel_path_for("plain") == "plain_kernel.txt");
}

TEST_CASE("eval mode prints the summary of the identity kernel") {
    TempFile kf("delta.txt");
    Kernel4D D(3, 1, 1);
    D.at(1, 1, 0, 0) = 1.0;
    kernel_write(kf.path, D);

    ExperimentConfig cfg;
    cfg.N = 5;
    cfg.alpha = 1.0;
    cfg.init = InitMode::file;
    cfg.kernel_file = kf.path;
    cfg.mode = RunMode::eval;

    std::ostringstream log;
    CHECK(run(cfg, log) == 0);
    CHECK(log.str() == "sigma_max=1, sigma_min=1, kappa=1, penalty=0\n");
}

TEST_CASE("file initialization lets the kernel dictate its own shape") {
    TempFile kf("shape22.txt");
    Kernel4D K(3, 2, 2);
    for (std::size_t i = 0; i < K.data.size(); ++i) K.data[i] = 0.01 * (double)(i + 1);
    kernel_write(kf.path, K);

    ExperimentConfig cfg;
    cfg.k = 1;  // deliberately contradicts the file; the file wins
    cfg.g = 9;
    cfg.h = 9;
    cfg.N = 4;
    cfg.init = InitMode::file;
    cfg.kernel_file = kf.path;
    cfg.mode = RunMode::eval;

    std::ostringstream log;
    CHECK(run(cfg, log) == 0);
    CHECK(log.str().find("sigma_max=") == 0);
}

TEST_CASE("descend mode writes the trace and the final kernel beside it") {
    TempFile csv("run.csv");
    TempFile kernel("run_kernel.txt");

    ExperimentConfig cfg;
    cfg.k = 3;
    cfg.g = 2;
    cfg.h = 2;
    cfg.N = 5;
    cfg.iters = 3;
    cfg.seed = 7;
    cfg.out = csv.path;

    std::ostringstream log;
    CHECK(run(cfg, log) == 0);
    CHECK(log.str().find("wrote " + csv.path + " (4 rows)") != std::string::npos);

    const std::vector<TraceRow> trace = trace_read_csv(csv.path);
    REQUIRE(trace.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(trace[i].iter == i);
    CHECK(trace[0].has_oracle); // small enough for the dense cap

    const Kernel4D K = kernel_read(kernel.path);
    CHECK(K.k == 3);
    CHECK(K.g == 2);
    CHECK(K.h == 2);
}

TEST_CASE("identical configurations produce byte-identical outputs") {
    TempFile csv1("rep1.csv"), k1("rep1_kernel.txt");
    TempFile csv2("rep2.csv"), k2("rep2_kernel.txt");

    ExperimentConfig cfg;
    cfg.k = 3;
    cfg.g = 2;
    cfg.h = 1;
    cfg.N = 6;
    cfg.iters = 4;
    cfg.seed = 11;

    std::ostringstream log;
    cfg.out = csv1.path;
    CHECK(run(cfg, log) == 0);
    cfg.out = csv2.path;
    CHECK(run(cfg, log) == 0);

    CHECK(slurp(csv1.path) == slurp(csv2.path));
    CHECK(slurp(k1.path) == slurp(k2.path));
}

TEST_CASE("check mode passes on a small well-posed configuration") {
    ExperimentConfig cfg;
    cfg.k = 3;
    cfg.g = 2;
    cfg.h = 2;
    cfg.N = 4;
    cfg.mode = RunMode::check;

    std::ostringstream log;
    CHECK(run(cfg, log) == 0);
    CHECK(log.str().find("check passed") != std::string::npos);

    // rank-deficient shape: the window premise is structurally unreachable
    cfg.g = 2;
    cfg.h = 1;
    std::ostringstream log2;
    CHECK(run(cfg, log2) == 0);
    CHECK(log2.str().find("check passed") != std::string::npos);
}

TEST_CASE("configuration validation rejects inconsistent requests") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    ExperimentConfig bad = cfg;
    bad.k = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = cfg;
    bad.N = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = cfg;
    bad.lr = -0.5;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = cfg;
    bad.init = InitMode::file; // no kernel_file given
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = cfg;
    bad.mode = RunMode::descend;
    bad.out.clear();
    CHECK_THROWS_AS(bad.validate(), Error);
}
