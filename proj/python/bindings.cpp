// Python bindings for the solver core: sets, paths, operators, the two
// evolution solvers, and the contact demo pipeline.
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sweepvi/contact.hpp"
#include "sweepvi/convex.hpp"
#include "sweepvi/csv.hpp"
#include "sweepvi/errors.hpp"
#include "sweepvi/evi.hpp"
#include "sweepvi/moving_set.hpp"
#include "sweepvi/operators.hpp"
#include "sweepvi/sweeping.hpp"

namespace py = pybind11;
using namespace sweepvi;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Implicit sweeping-process / quasistatic friction solver";

  // Exceptions: everything the library throws derives from Error, so one
  // Python-side base class suffices; rejection-style errors get their own
  // type because callers branch on them.
  const py::object error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error);
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error);
  py::register_exception<CertificateError>(m, "CertificateError", error);
  py::register_exception<StepError>(m, "StepError", error);

  py::class_<SymmetricOperator>(m, "SymmetricOperator")
      .def(py::init<Eigen::MatrixXd>(), py::arg("entries"))
      .def_static("identity", &SymmetricOperator::identity, py::arg("dim"))
      .def_static("zero", &SymmetricOperator::zero, py::arg("dim"))
      .def_static("diagonal", &SymmetricOperator::diagonal, py::arg("diag"))
      .def_static("load", &SymmetricOperator::load, py::arg("file"))
      .def_property_readonly("dim", &SymmetricOperator::dim)
      .def("matrix", &SymmetricOperator::matrix,
           py::return_value_policy::reference_internal)
      .def("apply", &SymmetricOperator::apply, py::arg("x"))
      .def("coercivity_constant", &SymmetricOperator::coercivity_constant)
      .def("operator_norm", &SymmetricOperator::operator_norm)
      .def("solve_spd", &SymmetricOperator::solve_spd, py::arg("rhs"));

  py::class_<ConvexSet>(m, "ConvexSet")
      .def_static("box", &ConvexSet::box, py::arg("lower"), py::arg("upper"))
      .def_static("interval", &ConvexSet::interval, py::arg("lower"), py::arg("upper"))
      .def_static("ball", &ConvexSet::ball, py::arg("center"), py::arg("radius"))
      .def_static("translate", &ConvexSet::translate, py::arg("base"), py::arg("shift"))
      .def_static("reflect", &ConvexSet::reflect, py::arg("base"))
      .def_property_readonly("dim", &ConvexSet::dim)
      .def("project", &ConvexSet::project, py::arg("x"))
      .def("distance", &ConvexSet::distance, py::arg("x"))
      .def("support", &ConvexSet::support, py::arg("z"))
      .def("support_point", &ConvexSet::support_point, py::arg("z"))
      .def("normal_cone_contains", &ConvexSet::normal_cone_contains, py::arg("x"),
           py::arg("xi"), py::arg("tol"))
      .def("bounded", &ConvexSet::bounded)
      .def("equals", &ConvexSet::equals, py::arg("other"));

  m.def("truncate", &sweepvi::truncate, py::arg("set"), py::arg("radius"),
        "Intersection with the centered ball of the given radius.");
  m.def("hausdorff_box", &hausdorff_box, py::arg("a"), py::arg("b"));
  m.def("hausdorff_exact", &hausdorff_exact, py::arg("a"), py::arg("b"));
  m.def("hausdorff_estimate", &hausdorff_estimate, py::arg("a"), py::arg("b"),
        py::arg("directions") = 64);

  py::class_<TimePath>(m, "TimePath")
      .def_static("constant", &TimePath::constant, py::arg("value"))
      .def_static("ramp", &TimePath::ramp, py::arg("rate"))
      .def_static("piecewise_linear", &TimePath::piecewise_linear, py::arg("times"),
                  py::arg("values"))
      .def_static("closed_form", &TimePath::closed_form, py::arg("dim"), py::arg("value"),
                  py::arg("derivative"))
      .def_static("load_csv", &TimePath::load_csv, py::arg("file"))
      .def_property_readonly("dim", &TimePath::dim)
      .def("value", &TimePath::value, py::arg("t"))
      .def("derivative", &TimePath::derivative, py::arg("t"))
      .def("arc_length", &TimePath::arc_length, py::arg("s"), py::arg("t"),
           py::arg("abs_tol") = 1e-10);

  py::class_<MovingSet>(m, "MovingSet")
      .def_static("translated", &MovingSet::translated, py::arg("base"), py::arg("path"),
                  py::arg("horizon"))
      .def_static("sampled", &MovingSet::sampled, py::arg("times"), py::arg("sets"),
                  py::arg("modulus_samples"))
      .def_property_readonly("horizon", &MovingSet::horizon)
      .def_property_readonly("dim", &MovingSet::dim)
      .def("set_at", &MovingSet::set_at, py::arg("t"))
      .def("modulus", &MovingSet::modulus, py::arg("s"), py::arg("t"));

  py::class_<ValidationReport::Check>(m, "Check")
      .def_readonly("name", &ValidationReport::Check::name)
      .def_readonly("passed", &ValidationReport::Check::passed)
      .def_readonly("value", &ValidationReport::Check::value)
      .def_readonly("detail", &ValidationReport::Check::detail);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("checks", &ValidationReport::checks)
      .def("passed", &ValidationReport::passed)
      .def("__str__", &ValidationReport::to_string);

  m.def("validate_operators", &validate_operators, py::arg("A"), py::arg("B"),
        py::arg("tol") = 1e-10);
  m.def(
      "validate_moving_set",
      [](const MovingSet& family, const std::vector<double>& grid, double tol) {
        return validate_moving_set(family, grid, tol);
      },
      py::arg("family"), py::arg("grid"), py::arg("tol") = 1e-8);

  py::class_<StepOptions>(m, "StepOptions")
      .def(py::init<>())
      .def_readwrite("tol", &StepOptions::tol)
      .def_readwrite("max_iter", &StepOptions::max_iter);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("tol", &SolverOptions::tol)
      .def_readwrite("max_iter", &SolverOptions::max_iter)
      .def_readwrite("equiv_tol", &SolverOptions::equiv_tol)
      .def_readwrite("crosscheck", &SolverOptions::crosscheck);

  py::class_<StepResult>(m, "StepResult")
      .def_readonly("velocity", &StepResult::velocity)
      .def_readonly("residual", &StepResult::residual)
      .def_readonly("iterations", &StepResult::iterations);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("velocities", &Trajectory::velocities)
      .def_readonly("step_residuals", &Trajectory::step_residuals)
      .def("interpolate", &Trajectory::interpolate, py::arg("t"))
      .def("max_velocity_norm", &Trajectory::max_velocity_norm)
      .def_property_readonly("dim", &Trajectory::dim)
      .def("steps", &Trajectory::steps);

  py::class_<SweepingProblem>(m, "SweepingProblem")
      .def(py::init([](SymmetricOperator A, SymmetricOperator B, MovingSet sets,
                       Eigen::VectorXd u0, double horizon) {
             return SweepingProblem{std::move(A), std::move(B), std::move(sets),
                                    std::move(u0), horizon};
           }),
           py::arg("A"), py::arg("B"), py::arg("sets"), py::arg("u0"), py::arg("horizon"))
      .def_readonly("A", &SweepingProblem::A)
      .def_readonly("B", &SweepingProblem::B)
      .def_readonly("sets", &SweepingProblem::sets)
      .def_readonly("u0", &SweepingProblem::u0)
      .def_readonly("horizon", &SweepingProblem::horizon);

  m.def("catching_up_step", &catching_up_step, py::arg("A"), py::arg("B"),
        py::arg("next_set"), py::arg("u_prev"), py::arg("opts") = StepOptions{});
  m.def("solve", &solve, py::arg("problem"), py::arg("steps"),
        py::arg("opts") = SolverOptions{});
  m.def("viability_residual", &viability_residual, py::arg("trajectory"),
        py::arg("problem"));

  py::class_<VelocityBounds>(m, "VelocityBounds")
      .def_readonly("conservative_bound", &VelocityBounds::conservative_bound)
      .def_readonly("sharp_bound", &VelocityBounds::sharp_bound);
  m.def("velocity_bounds", &velocity_bounds, py::arg("problem"));

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("n", &ConvergenceRow::n)
      .def_readonly("err_vs_next", &ConvergenceRow::err_vs_next)
      .def_readonly("ratio", &ConvergenceRow::ratio);
  m.def(
      "convergence_study",
      [](const SweepingProblem& problem, const std::vector<int>& ns,
         const SolverOptions& opts) { return convergence_study(problem, ns, opts); },
      py::arg("problem"), py::arg("ns"), py::arg("opts") = SolverOptions{});

  py::class_<FrictionFunctional>(m, "FrictionFunctional")
      .def(py::init<Eigen::VectorXd>(), py::arg("weights"))
      .def_property_readonly("dim", &FrictionFunctional::dim)
      .def("weights", &FrictionFunctional::weights,
           py::return_value_policy::reference_internal)
      .def("value", &FrictionFunctional::value, py::arg("w"))
      .def("prox", &FrictionFunctional::prox, py::arg("x"), py::arg("s"))
      .def("subdiff_zero", &FrictionFunctional::subdiff_zero);

  py::class_<EviProblem>(m, "EviProblem")
      .def(py::init([](SymmetricOperator A, SymmetricOperator B, FrictionFunctional J,
                       TimePath load, Eigen::VectorXd u0, double horizon) {
             return EviProblem{std::move(A), std::move(B), std::move(J), std::move(load),
                               std::move(u0), horizon};
           }),
           py::arg("A"), py::arg("B"), py::arg("J"), py::arg("load"), py::arg("u0"),
           py::arg("horizon"))
      .def_readonly("A", &EviProblem::A)
      .def_readonly("B", &EviProblem::B)
      .def_readonly("J", &EviProblem::J)
      .def_readonly("load", &EviProblem::load)
      .def_readonly("u0", &EviProblem::u0)
      .def_readonly("horizon", &EviProblem::horizon);

  m.def("evi_step", &evi_step, py::arg("A"), py::arg("B"), py::arg("u_prev"),
        py::arg("f_next"), py::arg("J"), py::arg("opts") = StepOptions{});
  m.def("solve_evi", &solve_evi, py::arg("problem"), py::arg("steps"),
        py::arg("opts") = SolverOptions{});
  m.def("to_sweeping", &to_sweeping, py::arg("problem"),
        "The equivalent set-valued evolution with C(t) = load(t) - dJ(0).");
  m.def("check_compatibility", &check_compatibility, py::arg("B"), py::arg("u0"),
        py::arg("f0"), py::arg("J"), py::arg("tol") = 1e-8);

  py::class_<CrosscheckReport>(m, "CrosscheckReport")
      .def_readonly("max_state_gap", &CrosscheckReport::max_state_gap)
      .def_readonly("max_velocity_gap", &CrosscheckReport::max_velocity_gap)
      .def_readonly("max_state_norm", &CrosscheckReport::max_state_norm)
      .def_readonly("tolerance", &CrosscheckReport::tolerance)
      .def_readonly("pass_", &CrosscheckReport::pass)
      .def("__str__", &CrosscheckReport::to_string);
  m.def("crosscheck", &crosscheck, py::arg("problem"), py::arg("steps"),
        py::arg("opts") = SolverOptions{});

  py::enum_<BoundaryTag>(m, "BoundaryTag")
      .value("clamped", BoundaryTag::clamped)
      .value("traction", BoundaryTag::traction)
      .value("friction", BoundaryTag::friction);

  py::class_<ContactConfig>(m, "ContactConfig")
      .def(py::init<>())
      .def_readwrite("nx", &ContactConfig::nx)
      .def_readwrite("ny", &ContactConfig::ny)
      .def_readwrite("lx", &ContactConfig::lx)
      .def_readwrite("ly", &ContactConfig::ly)
      .def_readwrite("eta", &ContactConfig::eta)
      .def_readwrite("kappa", &ContactConfig::kappa)
      .def_readwrite("left", &ContactConfig::left)
      .def_readwrite("right", &ContactConfig::right)
      .def_readwrite("bottom", &ContactConfig::bottom)
      .def_readwrite("top", &ContactConfig::top)
      .def_readwrite("f0", &ContactConfig::f0)
      .def_readwrite("f2", &ContactConfig::f2)
      .def_readwrite("g", &ContactConfig::g)
      .def_readwrite("u0", &ContactConfig::u0)
      .def_readwrite("horizon", &ContactConfig::horizon);

  py::class_<ContactAssembly>(m, "ContactAssembly")
      .def_readonly("problem", &ContactAssembly::problem)
      .def_readonly("free_nodes", &ContactAssembly::free_nodes)
      .def_readonly("friction_dofs", &ContactAssembly::friction_dofs)
      .def_readonly("friction_nodes", &ContactAssembly::friction_nodes)
      .def_readonly("domain_mass", &ContactAssembly::domain_mass)
      .def_readonly("traction_mass", &ContactAssembly::traction_mass)
      .def_readonly("friction_weights", &ContactAssembly::friction_weights)
      .def_readonly("nx", &ContactAssembly::nx)
      .def_readonly("ny", &ContactAssembly::ny);

  py::class_<StickSlipRecord>(m, "StickSlipRecord")
      .def_readonly("time", &StickSlipRecord::time)
      .def_readonly("node", &StickSlipRecord::node)
      .def_readonly("slip", &StickSlipRecord::slip)
      .def_readonly("traction_residual", &StickSlipRecord::traction_residual);

  py::class_<StickSlipReport>(m, "StickSlipReport")
      .def_readonly("records", &StickSlipReport::records)
      .def_readonly("max_equilibrium_residual", &StickSlipReport::max_equilibrium_residual)
      .def_readonly("max_traction_excess", &StickSlipReport::max_traction_excess)
      .def_readonly("stick_count", &StickSlipReport::stick_count)
      .def_readonly("slip_count", &StickSlipReport::slip_count)
      .def_readonly("first_slip_time", &StickSlipReport::first_slip_time);

  py::class_<ContactRun>(m, "ContactRun")
      .def_readonly("assembly", &ContactRun::assembly)
      .def_readonly("trajectory", &ContactRun::trajectory)
      .def_readonly("stick_slip", &ContactRun::stick_slip)
      .def_readonly("crosscheck", &ContactRun::crosscheck);

  m.def("assemble", &assemble, py::arg("config"));
  m.def("run_contact", &run_contact, py::arg("config"), py::arg("steps"),
        py::arg("opts") = SolverOptions{});

  m.def("format_double", &format_double, py::arg("v"),
        "Shortest decimal string that round-trips the double exactly.");
  m.def("write_trajectory_csv", &write_trajectory_csv, py::arg("file"),
        py::arg("trajectory"));
  m.def("write_stickslip_csv", &write_stickslip_csv, py::arg("file"), py::arg("report"));
}
