#pragma once

#include <vector>

#include "mfront/problem.hpp"
#include "mfront/quadrature.hpp"
#include "mfront/signed_log.hpp"

namespace mfront {

// Exact stationary profile.  kappa is the flux-level constant selected by
// the implicit relation  int_{u_plus}^{u_minus} ds / (kappa - f(s)) = b(ell)/eps;
// the profile solves  eps a(x) u' = f(u) - kappa  with u(-ell) = u_minus.
struct ExactSteadyState {
    double kappa = 0.0;
    SignedLog kappa_excess;  // kappa - f(u_minus), kept in log form
    double x_star = 0.0;     // half-mass interface abscissa
    std::vector<double> profile;
    std::vector<double> profile_deriv;
    double boundary_residual = 0.0;
};

double solve_kappa_exact(const ProblemSpec& spec);
BranchConstant solve_kappa_exact_detail(const ProblemSpec& spec);
ExactSteadyState build_exact_steady(const ProblemSpec& spec);

// One member of the approximate steady family: two stationary branches
// matched continuously at the interface abscissa xi with value u_star.  The
// derivative jumps there; eps times the jump is the mass of the residual
// distribution, the single scalar that drives the interface dynamics.
struct ApproxSteadyState {
    double xi = 0.0;           // interface / match abscissa
    double match_value = 0.0;  // u_star
    double kappa_minus = 0.0;  // stationary flux constant of the left branch
    double kappa_plus = 0.0;   //   "      right branch ( = -eps a u' at the match)
    SignedLog delta_minus;     // kappa_minus - f(u_minus), log form
    SignedLog delta_plus;      // kappa_plus  - f(u_plus),  log form
    std::vector<double> profile;
    std::vector<double> profile_deriv;
    SignedLog jump;            // [[u']] at xi = (kappa_minus - kappa_plus)/(eps a(xi))
    double boundary_residual = 0.0;
    bool reaction_extension = false;  // true when built for the reaction kind
};

// Builds the family member with interface at xi.  xi must stay a fixed
// fraction of ell away from the boundary (default 5%), where the branch
// construction is well conditioned.  Sign convention: jump > 0 iff the
// interface sits left of the equilibrium abscissa.
ApproxSteadyState build_approx_member(const ProblemSpec& spec, double xi,
                                      double band_fraction = 0.05);

// Residual mass  Omega(xi) = eps |[[u']]|, in log form and as a double.
SignedLog omega_residual_log(const ProblemSpec& spec, const ApproxSteadyState& member);
double omega_residual(const ProblemSpec& spec, const ApproxSteadyState& member);

// d/dxi of the family profile by central differencing; dxi <= 0 selects the
// default step max(1e-6, 1e-4 eps).
std::vector<double> family_derivative(const ProblemSpec& spec, double xi, double dxi = 0.0);

// Root of f(u) = level on the given side of u_star (side < 0: u > u_star,
// matching the left branch far field; side > 0: u < u_star).  Used to read
// off the saturation amplitude that a branch would reach on an unbounded
// domain.
double saturation_state(const FluxSpec& flux, double level, int side);

}  // namespace mfront
