#include "sweepvi/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "sweepvi/errors.hpp"

namespace sweepvi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

IniFile parse_ini(std::istream& in, const std::string& origin) {
  IniFile ini;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ParseError(origin + ": unterminated section header", lineno);
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ParseError(origin + ": empty section name", lineno);
      ini.sections[section];  // register even if it stays empty
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ": expected 'key = value'", lineno);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ParseError(origin + ": empty key", lineno);
    if (section.empty())
      throw ParseError(origin + ": key '" + key + "' outside any [section]", lineno);
    if (ini.sections[section].count(key))
      throw ParseError(origin + ": duplicate key '" + section + "." + key + "'", lineno);
    ini.sections[section][key] = {value, lineno};
  }
  return ini;
}

IniFile parse_ini_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open config file: " + file.string(), 0);
  return parse_ini(in, file.string());
}

namespace {

/// Typed access to an IniFile with consumption tracking, so unknown keys can
/// be rejected at the end of loading.
class ConfigReader {
public:
  ConfigReader(IniFile ini, std::string origin, std::filesystem::path base_dir)
      : ini_(std::move(ini)), origin_(std::move(origin)), base_dir_(std::move(base_dir)) {}

  bool has(const std::string& section, const std::string& key) const {
    const auto s = ini_.sections.find(section);
    return s != ini_.sections.end() && s->second.count(key) > 0;
  }

  std::string require(const std::string& section, const std::string& key) {
    if (!has(section, key))
      throw ParseError(origin_ + ": missing required key", 0, section + "." + key);
    return consume(section, key);
  }

  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) {
    if (!has(section, key)) return fallback;
    return consume(section, key);
  }

  double to_double(const std::string& section, const std::string& key, const std::string& v) {
    try {
      size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (trim(v.substr(pos)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ParseError(origin_ + ": not a number: '" + v + "'", line(section, key),
                     section + "." + key);
  }

  int to_int(const std::string& section, const std::string& key, const std::string& v) {
    try {
      size_t pos = 0;
      const long x = std::stol(v, &pos);
      if (trim(v.substr(pos)).empty() && x >= std::numeric_limits<int>::min() &&
          x <= std::numeric_limits<int>::max())
        return static_cast<int>(x);
    } catch (const std::exception&) {
    }
    throw ParseError(origin_ + ": not an integer: '" + v + "'", line(section, key),
                     section + "." + key);
  }

  double require_double(const std::string& s, const std::string& k) {
    return to_double(s, k, require(s, k));
  }
  int require_int(const std::string& s, const std::string& k) {
    return to_int(s, k, require(s, k));
  }
  double double_or(const std::string& s, const std::string& k, double fb) {
    if (!has(s, k)) return fb;
    return to_double(s, k, consume(s, k));
  }
  int int_or(const std::string& s, const std::string& k, int fb) {
    if (!has(s, k)) return fb;
    return to_int(s, k, consume(s, k));
  }

  Eigen::VectorXd to_vector(const std::string& section, const std::string& key,
                            const std::string& v) {
    std::vector<double> vals;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      if (cell.empty())
        throw ParseError(origin_ + ": empty entry in list '" + v + "'", line(section, key),
                         section + "." + key);
      vals.push_back(to_double(section, key, cell));
    }
    if (vals.empty())
      throw ParseError(origin_ + ": empty list", line(section, key), section + "." + key);
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  }

  std::vector<int> to_int_list(const std::string& section, const std::string& key,
                               const std::string& v) {
    std::vector<int> vals;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(to_int(section, key, trim(cell)));
    if (vals.empty())
      throw ParseError(origin_ + ": empty list", line(section, key), section + "." + key);
    return vals;
  }

  /// Path specs: `ramp R1[,R2..]`, `constant V1[,V2..]`, `csv FILE`.
  TimePath to_path(const std::string& section, const std::string& key, const std::string& v) {
    std::istringstream ss(v);
    std::string form, arg;
    ss >> form;
    std::getline(ss, arg);
    arg = trim(arg);
    if (arg.empty())
      throw ParseError(origin_ + ": path spec '" + v + "' needs an argument",
                       line(section, key), section + "." + key);
    if (form == "ramp") return TimePath::ramp(to_vector(section, key, arg));
    if (form == "constant") return TimePath::constant(to_vector(section, key, arg));
    if (form == "csv") return TimePath::load_csv(resolve(arg));
    throw ParseError(origin_ + ": unknown path form '" + form +
                         "' (expected ramp/constant/csv)",
                     line(section, key), section + "." + key);
  }

  BoundaryTag to_tag(const std::string& section, const std::string& key, const std::string& v) {
    if (v == "clamped") return BoundaryTag::clamped;
    if (v == "traction") return BoundaryTag::traction;
    if (v == "friction") return BoundaryTag::friction;
    throw ParseError(origin_ + ": unknown boundary tag '" + v +
                         "' (expected clamped/traction/friction)",
                     line(section, key), section + "." + key);
  }

  std::filesystem::path resolve(const std::string& rel) const {
    std::filesystem::path p(rel);
    return p.is_absolute() ? p : base_dir_ / p;
  }

  void finish() const {
    for (const auto& [section, entries] : ini_.sections)
      for (const auto& [key, entry] : entries)
        if (!consumed_.count(section + "." + key))
          throw ParseError(origin_ + ": unknown key", entry.line, section + "." + key);
  }

  const std::string& origin() const { return origin_; }

private:
  std::string consume(const std::string& section, const std::string& key) {
    consumed_.insert(section + "." + key);
    return ini_.sections.at(section).at(key).value;
  }
  int line(const std::string& section, const std::string& key) const {
    const auto s = ini_.sections.find(section);
    if (s == ini_.sections.end()) return 0;
    const auto k = s->second.find(key);
    return k == s->second.end() ? 0 : k->second.line;
  }

  IniFile ini_;
  std::string origin_;
  std::filesystem::path base_dir_;
  std::set<std::string> consumed_;
};

ConvexSet parse_base_set(ConfigReader& r, const std::string& section, const std::string& key,
                         const std::string& v) {
  std::istringstream ss(v);
  std::string form;
  ss >> form;
  std::vector<std::string> args;
  std::string tok;
  while (ss >> tok) args.push_back(tok);
  try {
    if (form == "box" && args.size() == 2)
      return ConvexSet::box(r.to_vector(section, key, args[0]),
                            r.to_vector(section, key, args[1]));
    if (form == "ball" && args.size() == 2)
      return ConvexSet::ball(r.to_vector(section, key, args[0]),
                             r.to_double(section, key, args[1]));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(r.origin() + ": bad set spec '" + v + "': " + e.what(), 0,
                     section + "." + key);
  }
  throw ParseError(r.origin() + ": unknown set spec '" + v +
                       "' (expected 'box LOWER UPPER' or 'ball CENTER RADIUS')",
                   0, section + "." + key);
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& file) {
  ConfigReader r(parse_ini_file(file), file.string(),
                 file.has_parent_path() ? file.parent_path() : std::filesystem::path("."));
  RunConfig cfg;

  const std::string kind = r.require("problem", "kind");
  if (kind == "scalar-demo") cfg.kind = ProblemKind::scalar_demo;
  else if (kind == "translated-family") cfg.kind = ProblemKind::translated_family;
  else if (kind == "contact") cfg.kind = ProblemKind::contact;
  else
    throw ParseError(file.string() + ": unknown kind '" + kind +
                         "' (expected scalar-demo/translated-family/contact)",
                     0, "problem.kind");

  cfg.horizon = r.require_double("time", "T");
  if (!(cfg.horizon > 0.0))
    throw ParseError(file.string() + ": T must be > 0", 0, "time.T");
  cfg.steps = r.require_int("time", "n");
  if (cfg.steps < 1) throw ParseError(file.string() + ": n must be >= 1", 0, "time.n");

  cfg.solver.tol = r.double_or("solver", "tol", cfg.solver.tol);
  if (!(cfg.solver.tol > 0.0))
    throw ParseError(file.string() + ": tol must be > 0", 0, "solver.tol");
  cfg.solver.max_iter = r.int_or("solver", "max_iter", static_cast<int>(cfg.solver.max_iter));
  if (cfg.solver.max_iter < 1)
    throw ParseError(file.string() + ": max_iter must be >= 1", 0, "solver.max_iter");
  cfg.solver.equiv_tol = r.double_or("solver", "equiv_tol", cfg.solver.equiv_tol);
  if (!(cfg.solver.equiv_tol > 0.0))
    throw ParseError(file.string() + ": equiv_tol must be > 0", 0, "solver.equiv_tol");
  if (r.has("solver", "ns"))
    cfg.ns = r.to_int_list("solver", "ns", r.get_or("solver", "ns", ""));

  cfg.out_dir = r.resolve(r.get_or("output", "dir", "out"));

  switch (cfg.kind) {
    case ProblemKind::scalar_demo: {
      RunConfig::ScalarDemo s;
      s.a = r.require_double("scalar", "a");
      s.b = r.require_double("scalar", "b");
      s.g = r.require_double("scalar", "g");
      s.u0 = r.double_or("scalar", "u0", 0.0);
      s.f = r.to_path("scalar", "f", r.require("scalar", "f"));
      if (s.f.dim() != 1)
        throw ParseError(file.string() + ": scalar load path must have one component", 0,
                         "scalar.f");
      cfg.scalar = std::move(s);
      break;
    }
    case ProblemKind::translated_family: {
      Eigen::MatrixXd A, B;
      try {
        A = SymmetricOperator::load(r.resolve(r.require("operators", "A"))).matrix();
      } catch (const InvalidArgument& e) {
        throw ParseError(file.string() + ": " + e.what(), 0, "operators.A");
      }
      try {
        B = SymmetricOperator::load(r.resolve(r.require("operators", "B"))).matrix();
      } catch (const InvalidArgument& e) {
        throw ParseError(file.string() + ": " + e.what(), 0, "operators.B");
      }
      RunConfig::Family fam{std::move(A), std::move(B),
                            parse_base_set(r, "family", "base", r.require("family", "base")),
                            r.to_path("family", "path", r.require("family", "path")),
                            r.to_vector("initial", "u0", r.require("initial", "u0"))};
      cfg.family = std::move(fam);
      break;
    }
    case ProblemKind::contact: {
      ContactConfig c;
      c.nx = r.int_or("grid", "nx", c.nx);
      c.ny = r.int_or("grid", "ny", c.ny);
      c.lx = r.double_or("grid", "lx", c.lx);
      c.ly = r.double_or("grid", "ly", c.ly);
      c.eta = r.require_double("materials", "eta");
      c.kappa = r.require_double("materials", "kappa");
      if (r.has("boundary", "left"))
        c.left = r.to_tag("boundary", "left", r.get_or("boundary", "left", ""));
      if (r.has("boundary", "right"))
        c.right = r.to_tag("boundary", "right", r.get_or("boundary", "right", ""));
      if (r.has("boundary", "bottom"))
        c.bottom = r.to_tag("boundary", "bottom", r.get_or("boundary", "bottom", ""));
      if (r.has("boundary", "top"))
        c.top = r.to_tag("boundary", "top", r.get_or("boundary", "top", ""));
      if (r.has("load", "f0")) c.f0 = r.to_path("load", "f0", r.get_or("load", "f0", ""));
      if (r.has("load", "f2")) c.f2 = r.to_path("load", "f2", r.get_or("load", "f2", ""));
      if (c.f0.dim() != 1)
        throw ParseError(file.string() + ": body-force path must have one component", 0,
                         "load.f0");
      if (c.f2.dim() != 1)
        throw ParseError(file.string() + ": traction path must have one component", 0,
                         "load.f2");
      c.g = r.to_vector("friction", "g", r.require("friction", "g"));
      if (r.has("initial", "u0"))
        c.u0 = r.to_vector("initial", "u0", r.get_or("initial", "u0", ""));
      c.horizon = cfg.horizon;
      cfg.contact = std::move(c);
      break;
    }
  }
  r.finish();
  return cfg;
}

EviProblem build_scalar_problem(const RunConfig::ScalarDemo& scalar, double horizon) {
  Eigen::VectorXd u0(1), g(1);
  u0 << scalar.u0;
  g << scalar.g;
  return EviProblem{SymmetricOperator::diagonal(Eigen::VectorXd::Constant(1, scalar.a)),
                    SymmetricOperator::diagonal(Eigen::VectorXd::Constant(1, scalar.b)),
                    FrictionFunctional{g}, scalar.f, std::move(u0), horizon};
}

SweepingProblem build_family_problem(const RunConfig::Family& family, double horizon) {
  SymmetricOperator A{family.A};
  SymmetricOperator B{family.B};
  MovingSet sets = MovingSet::translated(family.base, family.path, horizon);
  return SweepingProblem{std::move(A), std::move(B), std::move(sets), family.u0, horizon};
}

}  // namespace sweepvi
