#include "sweepvi/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "sweepvi/errors.hpp"

namespace sweepvi {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);  // binary: byte-identical across runs
  if (!out) throw Error("cannot open output file: " + file.string());
  return out;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& trajectory) {
  std::ofstream out = open_out(file);
  const Eigen::Index d = trajectory.dim();
  out << "t";
  for (Eigen::Index j = 0; j < d; ++j) out << ",u_" << (j + 1);
  for (Eigen::Index j = 0; j < d; ++j) out << ",z_" << (j + 1);
  out << ",residual\n";
  for (size_t i = 0; i < trajectory.times.size(); ++i) {
    out << format_double(trajectory.times[i]);
    for (Eigen::Index j = 0; j < d; ++j) out << "," << format_double(trajectory.states[i](j));
    if (i == 0) {
      // No step produced the initial state: velocity and residual cells empty.
      for (Eigen::Index j = 0; j < d; ++j) out << ",";
      out << ",\n";
    } else {
      for (Eigen::Index j = 0; j < d; ++j)
        out << "," << format_double(trajectory.velocities[i - 1](j));
      out << "," << format_double(trajectory.step_residuals[i - 1]) << "\n";
    }
  }
}

void write_stickslip_csv(const std::filesystem::path& file, const StickSlipReport& report) {
  std::ofstream out = open_out(file);
  out << "t,node_index,state,traction_residual\n";
  for (const auto& r : report.records)
    out << format_double(r.time) << "," << r.node << "," << (r.slip ? 1 : 0) << ","
        << format_double(r.traction_residual) << "\n";
}

void write_convergence_csv(const std::filesystem::path& file,
                           std::span<const ConvergenceRow> rows) {
  std::ofstream out = open_out(file);
  out << "n,err_vs_next,ratio\n";
  for (const auto& row : rows) {
    out << row.n << ",";
    if (!std::isnan(row.err_vs_next)) out << format_double(row.err_vs_next);
    out << ",";
    if (!std::isnan(row.ratio)) out << format_double(row.ratio);
    out << "\n";
  }
}

}  // namespace sweepvi
