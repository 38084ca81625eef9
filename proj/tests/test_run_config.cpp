#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qhd/io.hpp"
#include "qhd/run_config.hpp"
#include "qhd/solver.hpp"

using namespace qhd;

TEST_CASE("parses a full config") {
    const std::string text = R"(# reference run
seed = 42

[equilibrium]
gamma = 1.4
rho_star = 2.0
m_star = -0.5
mu = 0.7
k = 1.3

[grid]
L = 200
N = 1024

[time]
dt = 0.01
t_end = 12.5
output_stride = 4

[diagnostics]
s = 4
fit_window_lo = 50
fit_window_hi = 500

[solver]
dealias = off
rho_floor = 1e-7
allow_supersonic = on
)";
    const auto cfg = parse_run_config_text(text, "test.ini");
    CHECK(cfg.seed == 42);
    CHECK(cfg.gamma == 1.4);
    CHECK(cfg.rho_star == 2.0);
    CHECK(cfg.m_star == -0.5);
    CHECK(cfg.mu == 0.7);
    CHECK(cfg.k == 1.3);
    CHECK(cfg.L == 200.0);
    CHECK(cfg.N == 1024);
    CHECK(cfg.dt == 0.01);
    CHECK(cfg.t_end == 12.5);
    CHECK(cfg.output_stride == 4);
    CHECK(cfg.s == 4);
    CHECK(cfg.fit_window_lo == 50.0);
    CHECK(cfg.fit_window_hi == 500.0);
    CHECK_FALSE(cfg.dealias);
    CHECK(cfg.rho_floor == 1e-7);
    CHECK(cfg.allow_supersonic);
}

TEST_CASE("defaults survive a sparse config") {
    const auto cfg = parse_run_config_text("[grid]\nN = 128\n", "sparse.ini");
    CHECK(cfg.N == 128);
    CHECK(cfg.L == 400.0);
    CHECK(cfg.gamma == 2.0);
    CHECK(cfg.dealias);
}

TEST_CASE("errors carry file and line") {
    auto message_of = [](const std::string& text) {
        try {
            parse_run_config_text(text, "bad.ini");
        } catch (const std::exception& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };

    CHECK(message_of("[grid]\nbogus = 1\n") == "bad.ini:2: unknown key 'bogus' in [grid]");
    CHECK(message_of("\n[nope]\n") == "bad.ini:2: unknown section '[nope]'");
    CHECK(message_of("[grid]\nL = twelve\n") ==
          "bad.ini:2: key 'L': cannot parse 'twelve' as a number");
    CHECK(message_of("[time]\ndt 0.1\n") == "bad.ini:2: expected key = value");
    CHECK(message_of("[solver]\ndealias = maybe\n") ==
          "bad.ini:2: key 'dealias': expected on/off, got 'maybe'");
    CHECK(message_of("gamma = 2\n") == "bad.ini:1: unknown top-level key 'gamma'");
    CHECK(message_of("[grid\n") == "bad.ini:1: unterminated section header");
}

TEST_CASE("atomic write and formats") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qhd_io_test";
    fs::create_directories(dir);

    SUBCASE("round trip through the filesystem") {
        const fs::path p = dir / "out.csv";
        write_file_atomic(p, "a,b\n1,2\n");
        std::ifstream in(p);
        std::string line;
        std::getline(in, line);
        CHECK(line == "a,b");
        // no stray temp files left behind
        int extra = 0;
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.path().filename().string().find(".tmp") != std::string::npos) ++extra;
        }
        CHECK(extra == 0);
    }

    SUBCASE("missing directory raises io_error") {
        CHECK_THROWS_AS(write_file_atomic(dir / "nope" / "x.csv", "y"), io_error);
    }

    SUBCASE("17 significant digits") {
        CHECK(format_double(1.0) == "1");
        CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
        CHECK(format_double(0.1) == "0.10000000000000001");
    }

    SUBCASE("history csv layout") {
        EnergyHistory hist;
        hist.times = {0.0, 1.0};
        hist.sobolev_rho = {1.5, 1.25};
        hist.sobolev_m = {0.5, 0.25};
        hist.E_s = {2.5, 2.5};
        hist.F_s = {0.0, 0.125};
        hist.Q_s = {2.5, 2.625};
        hist.G_s = {2.0, 2.0};
        hist.mass_defect = {0.0, 1e-12};
        hist.momentum_defect = {0.0, -2e-12};
        const std::string csv = history_csv(hist);
        CHECK(csv.find("t,sobolev_rho_sp1,sobolev_m_s,E_s,F_s,Q_s,G_s,mass_defect,"
                       "momentum_defect\n") == 0);
        CHECK(csv.find("\r") == std::string::npos);  // LF endings only
        CHECK(csv.find("9.9999999999999998e-13") != std::string::npos);
    }

    fs::remove_all(dir);
}
