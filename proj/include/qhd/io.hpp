#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "qhd/solver.hpp"

namespace qhd {

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// All file output goes through here: write a sibling temp file, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// %.17g formatting used by every CSV column.
std::string format_double(double v);

// History CSV: t, sobolev_rho_sp1, sobolev_m_s, E_s, F_s, Q_s, G_s,
// mass_defect, momentum_defect.
std::string history_csv(const EnergyHistory& hist);

// Snapshot: header line with L N t gamma mu k rho_star m_star s, then N rows
// "x rho_pert m_pert".
std::string snapshot_text(const EquilibriumState& eq, const FieldState& state, int s);

}  // namespace qhd
