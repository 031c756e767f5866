#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mfront/config.hpp"
#include "mfront/experiments.hpp"
#include "mfront/pde.hpp"
#include "mfront/reduced.hpp"
#include "mfront/spectral.hpp"
#include "mfront/steady.hpp"

namespace py = pybind11;
using namespace mfront;

namespace {

SpeedMode mode_from_fast(bool fast) { return fast ? SpeedMode::fast : SpeedMode::accurate; }

ProblemSpec make_problem_py(double epsilon, double ell, int n, const std::string& flux_kind,
                            double u_minus, double u_plus, const std::string& diffusion_kind,
                            const std::map<std::string, std::vector<double>>& diffusion_params,
                            const std::vector<double>& flux_coefficients) {
    ExperimentConfig cfg;
    cfg.problem.epsilons = {epsilon};
    cfg.problem.ell = ell;
    cfg.problem.n = n;
    cfg.problem.flux_kind = flux_kind;
    cfg.problem.u_minus = u_minus;
    cfg.problem.u_plus = u_plus;
    cfg.problem.diffusion_kind = diffusion_kind;
    if (!diffusion_params.empty()) cfg.problem.diffusion_params = diffusion_params;
    cfg.problem.flux_coefficients = flux_coefficients;
    return cfg.make_problem(epsilon);
}

}  // namespace

PYBIND11_MODULE(_mfront, m) {
    m.doc() = "Steady states, spectra, and slow interface dynamics for viscous fronts";
    m.attr("__version__") = "0.1.0";

    py::class_<SignedLog>(m, "SignedLog", "A signed quantity kept as (sign, log|value|)")
        .def_readonly("sign", &SignedLog::sign)
        .def_readonly("log_abs", &SignedLog::log_abs)
        .def("value", &SignedLog::value)
        .def("__repr__", [](const SignedLog& s) {
            std::ostringstream os;
            os << "SignedLog(sign=" << s.sign << ", log_abs=" << s.log_abs << ")";
            return os.str();
        });

    py::class_<Grid1D>(m, "Grid1D")
        .def_readonly("ell", &Grid1D::ell)
        .def_readonly("x", &Grid1D::x)
        .def_readonly("h", &Grid1D::h)
        .def_readonly("uniform", &Grid1D::uniform)
        .def("n", &Grid1D::n);

    py::class_<FluxSpec>(m, "FluxSpec")
        .def_readonly("u_minus", &FluxSpec::u_minus)
        .def_readonly("u_plus", &FluxSpec::u_plus)
        .def_readonly("u_star", &FluxSpec::u_star)
        .def("f", &FluxSpec::f_at, py::arg("u"))
        .def("f_prime", &FluxSpec::fp_at, py::arg("u"));

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def_readonly("epsilon", &ProblemSpec::epsilon)
        .def_readonly("grid", &ProblemSpec::grid)
        .def_readonly("flux", &ProblemSpec::flux)
        .def_readonly("warnings", &ProblemSpec::warnings)
        .def("a", [](const ProblemSpec& s, double x) { return s.diffusion(x); }, py::arg("x"));

    py::class_<HypothesisCheck>(m, "HypothesisCheck")
        .def_readonly("name", &HypothesisCheck::name)
        .def_readonly("passed", &HypothesisCheck::pass)
        .def_readonly("margin", &HypothesisCheck::margin)
        .def_readonly("detail", &HypothesisCheck::detail);

    py::class_<HypothesesReport>(m, "HypothesesReport")
        .def_readonly("checks", &HypothesesReport::checks)
        .def("all_pass", &HypothesesReport::all_pass);

    py::class_<ExactSteadyState>(m, "ExactSteadyState")
        .def_readonly("kappa", &ExactSteadyState::kappa)
        .def_readonly("x_star", &ExactSteadyState::x_star)
        .def_readonly("profile", &ExactSteadyState::profile)
        .def_readonly("profile_deriv", &ExactSteadyState::profile_deriv)
        .def_readonly("boundary_residual", &ExactSteadyState::boundary_residual);

    py::class_<ApproxSteadyState>(m, "ApproxSteadyState")
        .def_readonly("xi", &ApproxSteadyState::xi)
        .def_readonly("match_value", &ApproxSteadyState::match_value)
        .def_readonly("kappa_minus", &ApproxSteadyState::kappa_minus)
        .def_readonly("kappa_plus", &ApproxSteadyState::kappa_plus)
        .def_readonly("profile", &ApproxSteadyState::profile)
        .def_readonly("profile_deriv", &ApproxSteadyState::profile_deriv)
        .def_readonly("jump", &ApproxSteadyState::jump)
        .def_readonly("boundary_residual", &ApproxSteadyState::boundary_residual)
        .def_readonly("reaction_extension", &ApproxSteadyState::reaction_extension);

    py::class_<SpectrumResult>(m, "SpectrumResult")
        .def_readonly("eigenvalues", &SpectrumResult::eigenvalues)
        .def_readonly("phi", &SpectrumResult::phi)
        .def_readonly("psi", &SpectrumResult::psi)
        .def_readonly("residuals", &SpectrumResult::residuals)
        .def_readonly("gap", &SpectrumResult::gap)
        .def_readonly("epsilon", &SpectrumResult::epsilon)
        .def_readonly("xi", &SpectrumResult::xi);

    py::class_<SpeedMap>(m, "SpeedMap")
        .def_readonly("xi_grid", &SpeedMap::xi_grid)
        .def_readonly("theta", &SpeedMap::theta)
        .def_readonly("theta_prime_at_star", &SpeedMap::theta_prime_at_star)
        .def_readonly("xi_star", &SpeedMap::xi_star);

    py::class_<InterfaceTrajectory>(m, "InterfaceTrajectory")
        .def_readonly("times", &InterfaceTrajectory::times)
        .def_readonly("xi", &InterfaceTrajectory::xi)
        .def_readonly("beta_fit", &InterfaceTrajectory::beta_fit)
        .def_property_readonly("provenance", [](const InterfaceTrajectory& t) {
            return t.provenance == TrajectoryProvenance::reduced ? "reduced" : "pde";
        });

    py::class_<InterfaceExtraction>(m, "InterfaceExtraction")
        .def_readonly("xi_hat", &InterfaceExtraction::xi_hat)
        .def_readonly("residual", &InterfaceExtraction::residual)
        .def_readonly("degraded", &InterfaceExtraction::degraded);

    py::class_<VNorms>(m, "VNorms")
        .def_readonly("l2", &VNorms::l2)
        .def_readonly("linf", &VNorms::linf)
        .def_readonly("h1_semi", &VNorms::h1_semi);

    py::class_<Snapshot>(m, "Snapshot")
        .def_readonly("t", &Snapshot::t)
        .def_readonly("u", &Snapshot::u)
        .def_readonly("xi_hat", &Snapshot::xi_hat)
        .def_readonly("xi_residual", &Snapshot::xi_residual)
        .def_readonly("xi_degraded", &Snapshot::xi_degraded)
        .def_readonly("v_norms", &Snapshot::v_norms)
        .def_readonly("spectral_coeffs", &Snapshot::spectral_coeffs);

    py::class_<PdeState>(m, "PdeState")
        .def_readonly("t", &PdeState::t)
        .def_readonly("u", &PdeState::u)
        .def_readonly("steps", &PdeState::steps)
        .def_readonly("mass_initial", &PdeState::mass_initial)
        .def_readonly("boundary_influx", &PdeState::boundary_influx)
        .def_readonly("max_mass_defect", &PdeState::max_mass_defect);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("trajectory", &RunResult::trajectory)
        .def_readonly("snapshots", &RunResult::snapshots)
        .def_readonly("final_state", &RunResult::final_state)
        .def_readonly("blew_up", &RunResult::blew_up)
        .def_readonly("blow_up_time", &RunResult::blow_up_time);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_static("from_json", &ExperimentConfig::from_json_text, py::arg("text"))
        .def_static("load", &ExperimentConfig::load_file, py::arg("path"))
        .def("to_json", &ExperimentConfig::to_json_text)
        .def("make_problem", &ExperimentConfig::make_problem, py::arg("epsilon"))
        .def_property_readonly("kind",
                               [](const ExperimentConfig& c) { return c.experiment.kind; })
        .def_property_readonly("epsilons",
                               [](const ExperimentConfig& c) { return c.problem.epsilons; });

    m.def("make_problem", &make_problem_py, py::arg("epsilon"), py::arg("ell") = 1.0,
          py::arg("n") = 1001, py::arg("flux_kind") = "burgers", py::arg("u_minus") = 1.0,
          py::arg("u_plus") = -1.0, py::arg("diffusion_kind") = "constant",
          py::arg("diffusion_params") = std::map<std::string, std::vector<double>>{},
          py::arg("flux_coefficients") = std::vector<double>{},
          "Build a problem specification on a uniform grid");

    m.def("validate_hypotheses", &validate_hypotheses, py::arg("spec"));
    m.def("equilibrium_point", &equilibrium_point, py::arg("spec"),
          "Interface abscissa of the exact steady state");

    m.def("exact_steady", &build_exact_steady, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "approx_member",
        [](const ProblemSpec& spec, double xi, double band_fraction) {
            return build_approx_member(spec, xi, band_fraction);
        },
        py::arg("spec"), py::arg("xi"), py::arg("band_fraction") = 0.05,
        py::call_guard<py::gil_scoped_release>());
    m.def("omega_residual", &omega_residual, py::arg("spec"), py::arg("member"),
          "Residual mass eps * |[[u']]| of a family member");
    m.def("omega_residual_log", &omega_residual_log, py::arg("spec"), py::arg("member"));
    m.def("family_derivative", &family_derivative, py::arg("spec"), py::arg("xi"),
          py::arg("dxi") = 0.0, py::call_guard<py::gil_scoped_release>());

    m.def(
        "spectrum",
        [](const ProblemSpec& spec, const ApproxSteadyState& member, int modes) {
            return spectrum_of_L(spec, member, static_cast<std::size_t>(modes));
        },
        py::arg("spec"), py::arg("member"), py::arg("modes") = 4,
        py::call_guard<py::gil_scoped_release>(),
        "Leading eigenvalues/eigenfunctions of the linearization about a family member");
    m.def(
        "spectrum",
        [](const ProblemSpec& spec, const ExactSteadyState& steady, int modes) {
            return spectrum_of_L(spec, steady, static_cast<std::size_t>(modes));
        },
        py::arg("spec"), py::arg("steady"), py::arg("modes") = 4,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "interface_speed",
        [](const ProblemSpec& spec, double xi, bool fast) {
            return interface_speed(spec, xi, mode_from_fast(fast));
        },
        py::arg("spec"), py::arg("xi"), py::arg("fast") = false,
        py::call_guard<py::gil_scoped_release>(),
        "Projected interface speed theta(xi), as a SignedLog");
    m.def(
        "speed_map",
        [](const ProblemSpec& spec, const std::vector<double>& xi_grid, bool fast) {
            return build_speed_map(spec, xi_grid, mode_from_fast(fast));
        },
        py::arg("spec"), py::arg("xi_grid"), py::arg("fast") = false,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "decay_rate",
        [](const ProblemSpec& spec, bool fast) { return decay_rate(spec, mode_from_fast(fast)); },
        py::arg("spec"), py::arg("fast") = false, py::call_guard<py::gil_scoped_release>(),
        "Linear decay rate -theta'(xi_star) of the reduced interface law");

    m.def(
        "integrate_interface",
        [](const ProblemSpec& spec, double xi0, double t_end, std::optional<double> target_xi,
           int output_points, const std::vector<double>& output_times, bool fast,
           int mesh_cells) {
            ReducedIntegration opts;
            opts.t_end = t_end;
            opts.target_xi = target_xi;
            opts.output_points = output_points;
            opts.output_times = output_times;
            opts.mode = mode_from_fast(fast);
            opts.mesh_cells = mesh_cells;
            return integrate_interface(spec, xi0, opts);
        },
        py::arg("spec"), py::arg("xi0"), py::arg("t_end") = 0.0,
        py::arg("target_xi") = std::nullopt, py::arg("output_points") = 200,
        py::arg("output_times") = std::vector<double>{}, py::arg("fast") = false,
        py::arg("mesh_cells") = 240, py::call_guard<py::gil_scoped_release>(),
        "Integrate the reduced interface law from xi0; set t_end or target_xi");
    m.def(
        "halving_time",
        [](const ProblemSpec& spec, double xi0, bool fast) {
            return halving_time(spec, xi0, mode_from_fast(fast));
        },
        py::arg("spec"), py::arg("xi0"), py::arg("fast") = false,
        py::call_guard<py::gil_scoped_release>(),
        "Time for the interface to cover half its distance to equilibrium");

    m.def(
        "extract_interface",
        [](const std::vector<double>& u, const ProblemSpec& spec, bool fast) {
            return extract_interface(u, spec, mode_from_fast(fast));
        },
        py::arg("u"), py::arg("spec"), py::arg("fast") = true,
        py::call_guard<py::gil_scoped_release>(),
        "Interface position of a state by vanishing projection on the adjoint mode");
    m.def("member_plus_bump", &member_plus_bump, py::arg("spec"), py::arg("xi"),
          py::arg("amplitude"), py::arg("center"), py::arg("width"));
    m.def("smoothed_riemann", &smoothed_riemann, py::arg("spec"), py::arg("x0"),
          py::arg("width"));
    m.def(
        "run_simulation",
        [](const ProblemSpec& spec, const std::vector<double>& u0, double t_end, double dt,
           double cfl_safety, int snapshot_count, double snapshot_t_min, int projection_modes) {
            IntegratorConfig cfg;
            cfg.t_end = t_end;
            cfg.dt = dt;
            cfg.cfl_safety = cfl_safety;
            cfg.snapshot_count = static_cast<std::size_t>(snapshot_count);
            cfg.snapshot_t_min = snapshot_t_min;
            cfg.projection_modes = static_cast<std::size_t>(projection_modes);
            return run_experiment(spec, u0, cfg);
        },
        py::arg("spec"), py::arg("u0"), py::arg("t_end"), py::arg("dt") = 0.0,
        py::arg("cfl_safety") = 0.25, py::arg("snapshot_count") = 40,
        py::arg("snapshot_t_min") = 1e-2, py::arg("projection_modes") = 0,
        py::call_guard<py::gil_scoped_release>(),
        "Time-step the full equation and track the interface");

    m.def("run_experiment_config", &run_experiment_config, py::arg("config"),
          py::arg("out_dir") = "", py::arg("jobs") = 0,
          py::call_guard<py::gil_scoped_release>(),
          "Run a configured experiment, writing CSV/JSON artifacts");
    m.def("run_preset", &run_preset, py::arg("name"), py::arg("out_dir") = "",
          py::arg("jobs") = 0, py::call_guard<py::gil_scoped_release>(),
          "Run a named preset study (eigen-scaling, residual-map, slow-motion, pde-vs-reduced)");
}
