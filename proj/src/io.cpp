#include "qhd/io.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace qhd {

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    if (!dir.empty() && !fs::exists(dir, ec)) {
        throw io_error("write_file_atomic: directory does not exist: " + dir.string());
    }

    // unique sibling temp name, then rename into place
    std::random_device rd;
    const fs::path tmp = path.string() + ".tmp" + std::to_string(rd() % 1000000);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("write_file_atomic: cannot open " + tmp.string());
        out << contents;
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw io_error("write_file_atomic: write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw io_error("write_file_atomic: rename failed for " + path.string());
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string history_csv(const EnergyHistory& hist) {
    std::ostringstream os;
    os << "t,sobolev_rho_sp1,sobolev_m_s,E_s,F_s,Q_s,G_s,mass_defect,momentum_defect\n";
    for (size_t i = 0; i < hist.times.size(); ++i) {
        os << format_double(hist.times[i]) << ',' << format_double(hist.sobolev_rho[i]) << ','
           << format_double(hist.sobolev_m[i]) << ',' << format_double(hist.E_s[i]) << ','
           << format_double(hist.F_s[i]) << ',' << format_double(hist.Q_s[i]) << ','
           << format_double(hist.G_s[i]) << ',' << format_double(hist.mass_defect[i]) << ','
           << format_double(hist.momentum_defect[i]) << '\n';
    }
    return os.str();
}

std::string snapshot_text(const EquilibriumState& eq, const FieldState& state, int s) {
    std::ostringstream os;
    os << "# L N t gamma mu k rho_star m_star s\n";
    os << format_double(state.grid.L) << ' ' << state.grid.N << ' ' << format_double(state.t)
       << ' ' << format_double(eq.params.gamma) << ' ' << format_double(eq.params.mu) << ' '
       << format_double(eq.params.k) << ' ' << format_double(eq.rho_star) << ' '
       << format_double(eq.m_star) << ' ' << s << '\n';
    for (int j = 0; j < state.grid.N; ++j) {
        os << format_double(state.grid.x(j)) << ' '
           << format_double(state.rho[static_cast<size_t>(j)]) << ' '
           << format_double(state.m[static_cast<size_t>(j)]) << '\n';
    }
    return os.str();
}

}  // namespace qhd
