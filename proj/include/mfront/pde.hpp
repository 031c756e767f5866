#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfront/problem.hpp"
#include "mfront/reduced.hpp"
#include "mfront/spectral.hpp"

namespace mfront {

// Time integrator parameters.  dt = 0 means "pick the stable step", i.e.
// cfl_safety * h / max|f'(u)| (explicit convection is the only stability
// constraint: diffusion is implicit).
struct IntegratorConfig {
    double dt = 0.0;
    double t_end = 1.0;
    double cfl_safety = 0.25;        // must be <= 0.9
    std::size_t snapshot_count = 40; // log-spaced between snapshot_t_min and t_end
    double snapshot_t_min = 1e-2;
    std::size_t projection_modes = 0;  // K spectral coefficients per snapshot (0 = skip)
    std::string scheme = "imex-llf";
};

// Evolving PDE state plus the running conservation ledger: the interior
// mass change of every step is compared against the boundary-flux
// prediction that the finite-volume update telescopes to.
struct PdeState {
    double t = 0.0;
    std::vector<double> u;
    std::size_t steps = 0;
    double mass_initial = 0.0;
    double boundary_influx = 0.0;  // time-integrated net in-flux (+ source term integral)
    double max_mass_defect = 0.0;  // max per-step |mass change - prediction|, relative

    // grid-derived coefficients, filled by make_state and reused every step
    // (the diffusion coefficient is sampled at the face midpoints once)
    std::vector<double> face_a, face_h, dual_cell;
};

// Raised when the solution loses finiteness; `time` is the last valid time.
class BlowUpError : public std::runtime_error {
  public:
    BlowUpError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

  private:
    double time_;
};

PdeState make_state(const ProblemSpec& spec, std::vector<double> u0);

// Largest stable step at the current state.
double stable_dt(const ProblemSpec& spec, const PdeState& state, const IntegratorConfig& cfg);

// One IMEX step of length dt: explicit conservative convection with a local
// Lax-Friedrichs flux evaluated at minmod-reconstructed face states --
// second order on smooth monotone data, so the steady profile is preserved
// at O(h^2) rather than the O(h) a first-order flux would give -- (or
// explicit source for the reaction kind), followed by implicit
// finite-volume diffusion solved with the tridiagonal algorithm; Dirichlet
// values re-imposed exactly.
void step(const ProblemSpec& spec, PdeState& state, const IntegratorConfig& cfg, double dt);

struct VNorms {
    double l2 = 0.0;
    double linf = 0.0;
    double h1_semi = 0.0;  // ||dv/dx||_L2 by face differences
};

struct InterfaceExtraction {
    double xi_hat = 0.0;
    double residual = 0.0;  // |<psi_1(.;xi_hat), u - U(.;xi_hat)>| at the solution
    bool degraded = false;  // fell back to the u*-crossing estimate
};

// Interface position of a profile: solves <psi_1(.;xi), u - U(.;xi)> = 0 by
// safeguarded secant iteration seeded at the u*-crossing (linear
// interpolation between the bracketing nodes).  mode selects how psi_1 is
// produced, as in the reduced module.  Throws std::domain_error when u has
// no u*-crossing or more than one.
InterfaceExtraction extract_interface(const std::vector<double>& u, const ProblemSpec& spec,
                                      SpeedMode mode = SpeedMode::fast);

struct Snapshot {
    double t = 0.0;
    std::vector<double> u;
    double xi_hat = 0.0;
    double xi_residual = 0.0;  // projection residual at xi_hat (the v1 constraint)
    bool xi_degraded = false;
    VNorms v_norms;                      // norms of v = u - U(.;xi_hat)
    std::vector<double> spectral_coeffs; // <psi_k, v>, k = 1..K (when requested)
};

struct RunResult {
    InterfaceTrajectory trajectory;  // provenance = pde, sampled at snapshot times
    std::vector<Snapshot> snapshots;
    PdeState final_state;
    bool blew_up = false;
    double blow_up_time = 0.0;
};

// Integrates from u0 to t_end, emitting log-spaced snapshots and the
// PDE-side interface trajectory.  A blow-up mid-run is caught: the result
// carries the snapshots taken so far with blew_up set.
RunResult run_experiment(const ProblemSpec& spec, const std::vector<double>& u0,
                         const IntegratorConfig& cfg);

struct PerturbationDiagnostics {
    VNorms v_norms;
    std::vector<double> coefficients;  // <psi_k, v> against the supplied spectrum
    double coupling_psi1 = 0.0;        // |<d/dxi psi_1, v>|, central difference in xi
};

// Norms and spectral content of the perturbation carried by a snapshot,
// measured against a spectrum computed at the snapshot's xi_hat.  The
// psi_1 xi-derivative is differenced with step 1e-3 * ell (two extra
// eigensolves).
PerturbationDiagnostics perturbation_diagnostics(const ProblemSpec& spec, const Snapshot& snap,
                                                 const SpectrumResult& spectrum);

// Initial-data builders.
std::vector<double> member_plus_bump(const ProblemSpec& spec, double xi, double amplitude,
                                     double center, double width);
std::vector<double> smoothed_riemann(const ProblemSpec& spec, double x0, double width);

}  // namespace mfront
