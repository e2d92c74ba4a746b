#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "sweepvi/contact.hpp"
#include "sweepvi/sweeping.hpp"

namespace sweepvi {

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

/// Header `t,u_1..u_d,z_1..z_d,residual`; one row per grid node.  Row 0 holds
/// the initial state with empty velocity/residual cells (no step led to it).
void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& trajectory);

/// Header `t,node_index,state,traction_residual`; state is 0 for stick, 1 for
/// slip; one row per (time node, friction node).
void write_stickslip_csv(const std::filesystem::path& file, const StickSlipReport& report);

/// Header `n,err_vs_next,ratio`; empty cells where a row has no value.
void write_convergence_csv(const std::filesystem::path& file,
                           std::span<const ConvergenceRow> rows);

}  // namespace sweepvi
