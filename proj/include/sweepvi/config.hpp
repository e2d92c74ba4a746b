#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sweepvi/contact.hpp"
#include "sweepvi/evi.hpp"
#include "sweepvi/sweeping.hpp"

namespace sweepvi {

/// INI-style configuration: `[section]` headers, `key = value` lines,
/// `#`/`;` comments.  Keys are tracked so loaders can reject unknown ones.
struct IniFile {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections;
};

IniFile parse_ini(std::istream& in, const std::string& origin = "<stream>");
IniFile parse_ini_file(const std::filesystem::path& file);

enum class ProblemKind { scalar_demo, translated_family, contact };

/// Parsed run configuration.  Parsing is syntactic: values are read and files
/// are loaded, but domain rules (coercivity, sign constraints, compatibility)
/// are checked later by the validate stage so they can be reported as named
/// check failures rather than parse errors.
struct RunConfig {
  ProblemKind kind = ProblemKind::scalar_demo;
  int steps = 1;
  double horizon = 1.0;
  SolverOptions solver;
  std::vector<int> ns;  ///< grid sizes for convergence studies (may be empty)
  std::filesystem::path out_dir = "out";

  struct ScalarDemo {
    double a = 1.0, b = 0.0, g = 0.0, u0 = 0.0;
    TimePath f = TimePath::constant(Eigen::VectorXd::Zero(1));
  };
  struct Family {
    Eigen::MatrixXd A, B;
    ConvexSet base = ConvexSet::interval(0.0, 0.0);
    TimePath path = TimePath::constant(Eigen::VectorXd::Zero(1));
    Eigen::VectorXd u0;
  };

  std::optional<ScalarDemo> scalar;
  std::optional<Family> family;
  std::optional<ContactConfig> contact;
};

/// Loads and syntactically checks a run configuration; relative file names
/// resolve against the config file's directory.  Malformed content raises
/// ParseError with line and field diagnostics.
RunConfig load_run_config(const std::filesystem::path& file);

/// Builds the evolution problems out of the parsed payloads; domain-rule
/// violations surface as InvalidArgument here.
EviProblem build_scalar_problem(const RunConfig::ScalarDemo& scalar, double horizon);
SweepingProblem build_family_problem(const RunConfig::Family& family, double horizon);

}  // namespace sweepvi
