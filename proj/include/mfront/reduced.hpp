#pragma once

#include <optional>
#include <vector>

#include "mfront/problem.hpp"
#include "mfront/signed_log.hpp"
#include "mfront/steady.hpp"

namespace mfront {

// How the adjoint eigenfunction entering the interface speed is obtained:
// `accurate` eigensolves the linearized operator at every requested xi,
// `fast` substitutes the closed-form small-eps limit (conservation kind).
enum class SpeedMode { accurate, fast };

// Interface speed theta(xi) = eps * [[u']](xi) * psi_1(xi), with psi_1
// rescaled so that the trapezoid pairing <psi_1, d/dxi U(.;xi)> equals 1.
// Exponentially small in 1/eps away from the equilibrium, hence the
// signed-log carrier.  Throws std::domain_error when the normalization
// pairing is below 1e-14 in magnitude (non-transversal family direction).
SignedLog interface_speed(const ProblemSpec& spec, double xi,
                          SpeedMode mode = SpeedMode::accurate);

// Equilibrium interface abscissa (the zero of the speed map, which the
// half-mass point of the diffusion-weighted coordinate locates).
double equilibrium_abscissa(const ProblemSpec& spec);

struct SpeedMap {
    std::vector<double> xi_grid;
    std::vector<SignedLog> theta;
    double theta_prime_at_star = 0.0;  // central-difference slope at xi_star
    double xi_star = 0.0;
};

// Samples the speed on the given xi grid and differentiates it at the
// equilibrium.  The grid must stay inside the admissible band.
SpeedMap build_speed_map(const ProblemSpec& spec, const std::vector<double>& xi_grid,
                         SpeedMode mode = SpeedMode::accurate);

// Linearized decay rate beta = -theta'(xi_star), central difference with
// step 1e-3 * ell carried out in signed-log arithmetic.  Throws
// std::domain_error when the computed rate is not positive (the sign
// condition (xi - xi_star) * theta(xi) < 0 must hold for the reduced
// dynamics to contract).
double decay_rate(const ProblemSpec& spec, SpeedMode mode = SpeedMode::accurate);

enum class TrajectoryProvenance { reduced, pde };

struct InterfaceTrajectory {
    std::vector<double> times;
    std::vector<double> xi;
    TrajectoryProvenance provenance = TrajectoryProvenance::reduced;
    double beta_fit = 0.0;  // exponential rate fitted on the late-time tail
};

struct ReducedIntegration {
    double t_end = 0.0;               // horizon; ignored when target_xi is set
    std::optional<double> target_xi;  // stop when xi reaches this value instead
    std::size_t output_points = 200;  // log-spaced samples on the trajectory
    std::vector<double> output_times; // explicit sample times (overrides log spacing)
    SpeedMode mode = SpeedMode::accurate;
    std::size_t mesh_cells = 240;     // quadrature cells, geometric toward xi_star
};

// Integrates d xi/dt = theta(xi) from xi0 by separable quadrature of
// t(xi) = int dxi / theta(xi) on a mesh refined geometrically toward the
// equilibrium (the only way to reach horizons of order e^{C/eps}: a time
// stepper would need e^{C/eps} steps).  The integration stops at distance
// 1e-6 * ell from xi_star, where the remaining motion is below plotting
// resolution.  Throws std::domain_error when target_xi lies at or beyond
// the equilibrium as seen from xi0 (trajectories cannot cross it).
InterfaceTrajectory integrate_interface(const ProblemSpec& spec, double xi0,
                                        const ReducedIntegration& opts);

// Time for the interface to cover half its initial distance to the
// equilibrium; the quantity whose log grows like 1/eps.
double halving_time(const ProblemSpec& spec, double xi0, SpeedMode mode = SpeedMode::accurate);

}  // namespace mfront
