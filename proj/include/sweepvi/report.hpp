#pragma once

#include <string>
#include <vector>

namespace sweepvi {

/// Outcome of a validation routine: a list of named checks, each with the
/// measured quantity that decided it.  The report passes iff every check does.
struct ValidationReport {
  struct Check {
    std::string name;
    bool passed = false;
    double value = 0.0;    ///< measured quantity behind the verdict
    std::string detail;    ///< optional human-readable context
  };

  std::vector<Check> checks;

  void add(std::string name, bool passed, double value, std::string detail = "") {
    checks.push_back({std::move(name), passed, value, std::move(detail)});
  }

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  std::string to_string() const;
};

}  // namespace sweepvi
