#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sweepvi::cli {

/// Shared command-line options; unset values fall back to the config file.
struct CommonOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> steps;
  std::optional<double> tol;
};

/// Exit codes: 0 success / checks pass, 1 failed checks or failed run,
/// 2 usage or parse errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int cmd_validate(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_run(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_crosscheck(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_converge(const CommonOptions& opts, const std::vector<int>& ns, std::ostream& out,
                 std::ostream& err);

struct ContactDemoOptions {
  std::filesystem::path out_dir = "out";
  int steps = 200;
  double tol = 1e-10;
};

int cmd_contact_demo(const ContactDemoOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace sweepvi::cli
