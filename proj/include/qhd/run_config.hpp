#pragma once

#include <cstdint>
#include <string>

namespace qhd {

// Flat INI-style run description with [section] headers. Files are archived
// next to outputs, so every key has a readable name; all keys are mirrored
// as CLI flags and flags win.
//
//   [equilibrium] gamma rho_star m_star mu k
//   [grid]        L N
//   [time]        dt t_end output_stride
//   [diagnostics] s fit_window_lo fit_window_hi
//   [solver]      dealias rho_floor allow_supersonic
//   seed (top level, before any section)
struct RunConfig {
    double gamma = 2.0;
    double rho_star = 1.0;
    double m_star = 1.0;
    double mu = 1.0;
    double k = 1.0;

    double L = 400.0;
    int N = 4096;

    double dt = 0;  // <= 0: automatic
    double t_end = 50.0;
    int output_stride = 10;

    int s = 3;
    double fit_window_lo = 100.0;
    double fit_window_hi = 1000.0;

    bool dealias = true;
    double rho_floor = -1;
    bool allow_supersonic = false;

    std::uint64_t seed = 12345;
};

// Parses the file, rejecting unknown sections/keys and malformed values with
// a "file:line: ..." message (thrown as std::runtime_error).
RunConfig parse_run_config_file(const std::string& path);
RunConfig parse_run_config_text(const std::string& text, const std::string& origin);

}  // namespace qhd
