#pragma once

#include <functional>

#include "mfront/problem.hpp"
#include "mfront/signed_log.hpp"

namespace mfront {

// Adaptive Simpson quadrature with absolute tolerance.  Throws
// std::runtime_error if the recursion depth limit is hit before the
// tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 60);

// Level integral  Phi(k) = int_{ua}^{ub} ds / (k - f(s))  for a convex
// polynomial flux with f < k on (ua, ub).  This is the implicit relation
// whose root in k selects a stationary branch: the integral equals the
// b-coordinate length of the subinterval the branch traverses, divided by
// epsilon.
//
// When k is exponentially close to the flux level of an endpoint where
// f' != 0, the integrand develops a boundary layer of width
// delta / |f'(end)| with delta = k - f(end).  That layer is integrated in
// the stretched variable tau with  s = end -/+ (e^tau - 1) delta / |f'|,
// under which the integrand is O(1) and smooth; the offset from the
// endpoint is kept as a separate number and fed through the polynomial
// recentering so k - f(s) never suffers cancellation.  This keeps Phi
// accurate for delta down to ~1e-300, i.e. layers far narrower than the
// spacing of representable abscissae.
//
// log_delta_a / log_delta_b give log(k - f(end)) for the two endpoints when
// the caller knows them exactly (they do during branch solves); pass NaN to
// have them computed from k.
double level_integral(const Polynomial& f, const Polynomial& f_prime, double k, double ua,
                      double ub, double rel_tol, double log_delta_a, double log_delta_b);

// Result of a branch-constant solve.  The constant is k = base_level + delta
// with base_level the flux value at the singular endpoint; delta is carried
// in log form so that two branch constants can be subtracted without
// cancellation even when both excesses are far below machine epsilon
// relative to the base level.
struct BranchConstant {
    double k = 0.0;             // base_level + delta (rounded to double)
    double base_level = 0.0;    // f at the active endpoint
    SignedLog delta;            // k - base_level, always positive
};

// Solve  Phi(k) = target  for k > max(f(ua), f(ub)) by bisection on
// log(delta).  Phi is strictly decreasing in k, diverging as delta -> 0+
// and vanishing as k -> infinity, so the root exists and is unique for any
// positive target.  rel_tol applies to the Phi residual relative to target.
BranchConstant solve_level_constant(const Polynomial& f, const Polynomial& f_prime, double ua,
                                    double ub, double target, double rel_tol = 1e-12);

}  // namespace mfront
