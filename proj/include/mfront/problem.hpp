#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfront/function_catalog.hpp"
#include "mfront/grid.hpp"

namespace mfront {

// Diffusion coefficient a(x) with its declared ellipticity window.  The
// declared bounds are what the well-posedness theory needs; whether the
// sampled coefficient actually honours them is reported by
// validate_hypotheses rather than silently trusted.
struct DiffusionCoefficient {
    SpatialFunction a;
    double alpha = 0.0;  // declared lower bound, must be > 0
    double beta = 0.0;   // declared upper bound

    double operator()(double x) const { return a(x); }
    double deriv(double x) const { return a.deriv(x); }
};

enum class FluxKind {
    conservation,  // G(u, u_x) = d/dx f(u), f uniformly convex
    reaction       // G(u, u_x) = g(u), bistable source (extension beyond the
                   // convective setting; flagged in outputs)
};

// Nonlinearity specification.  For the conservation kind the polynomial f is
// normalised at construction so that f(u_star) = 0, with u_star the unique
// minimiser of f between the boundary states; the applied shift is recorded.
// For the reaction kind, g is kept as given and u_star is its middle zero.
struct FluxSpec {
    FluxKind kind = FluxKind::conservation;
    Polynomial f;        // conservation flux (normalised), or untouched g
    Polynomial f_prime;
    Polynomial f_second;
    double u_minus = 0.0;  // boundary state at x = -ell
    double u_plus = 0.0;   // boundary state at x = +ell
    double u_star = 0.0;   // matching value between the two branches
    double normalization_shift = 0.0;

    static FluxSpec conservation(Polynomial flux, double u_minus, double u_plus);
    static FluxSpec reaction(Polynomial source, double u_minus, double u_plus);
    static FluxSpec burgers(double u_minus = 1.0, double u_plus = -1.0);

    double f_at(double u) const { return f(u); }
    double fp_at(double u) const { return f_prime(u); }
};

struct ProblemSpec {
    double epsilon = 0.0;
    Grid1D grid;
    DiffusionCoefficient diffusion;
    FluxSpec flux;
    std::vector<std::string> warnings;  // non-fatal construction diagnostics

    static ProblemSpec make(double epsilon, Grid1D grid, DiffusionCoefficient diffusion,
                            FluxSpec flux);
};

// Antiderivative b(x) = int_{-ell}^{x} dt / a(t), evaluated by per-cell
// Simpson quadrature with the midpoint sample (composite fourth order).
// Strictly increasing because a > 0.  The cached form amortises the prefix
// sums for the many lookups the steady-state and spectral modules make.
class BCoordinate {
  public:
    explicit BCoordinate(const ProblemSpec& spec);

    double value(double x) const;
    double total() const { return prefix_.back(); }
    // Inverse map: the x with b(x) = target, by bisection.  target must lie
    // in [0, b(ell)].
    double inverse(double target) const;

  private:
    const Grid1D* grid_;
    std::function<double(double)> inv_a_;
    std::vector<double> prefix_;  // b at the grid nodes
};

double b_integral(const ProblemSpec& spec, double x);

// Interface abscissa of the exact steady state, defined through the
// half-mass relation b(x*) = b(ell)/2 and located by bisection.  Errors out
// if the sign of b - b(ell)/2 changes more than once across the mesh (which
// can only happen when a is not positive, i.e. the problem is ill-posed).
double equilibrium_point(const ProblemSpec& spec);

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;   // signed distance to the failure boundary
    std::string detail;
};

struct HypothesesReport {
    std::vector<HypothesisCheck> checks;
    bool all_pass() const;
    const HypothesisCheck* find(const std::string& name) const;
};

// Runtime verification of the structural hypotheses: ellipticity of a,
// uniform convexity of f, entropic ordering of the boundary states, equal
// boundary flux levels, and grid resolution against the layer width.
HypothesesReport validate_hypotheses(const ProblemSpec& spec);

// Throws std::domain_error with the failing check names if the hypotheses
// required by the steady-family and spectral machinery do not hold.
void require_hypotheses(const ProblemSpec& spec);

}  // namespace mfront
