#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mfront/problem.hpp"
#include "mfront/signed_log.hpp"
#include "mfront/steady.hpp"
#include "mfront/tridiagonal.hpp"

namespace mfront {

enum class OperatorKind { linearized, surrogate };

// Discretized operator on the interior nodes of spec.grid (homogeneous
// Dirichlet rows eliminated).  `symmetric` is set only when the stored
// matrix has exactly equal off-diagonal bands by construction.
struct TridiagonalOperator {
    Tridiagonal matrix;
    double epsilon = 0.0;
    OperatorKind kind = OperatorKind::linearized;
    bool symmetric = false;
    std::vector<std::string> warnings;

    std::size_t dim() const { return matrix.size(); }
};

// Samples of the surrogate potential on the full grid, plus the
// one-sided limits at the matching point (where the profile derivative
// jumps for the conservation kind).
struct PotentialW {
    std::vector<double> values;
    double at_interface_left = 0.0;
    double at_interface_right = 0.0;
    double interface = 0.0;
};

struct SpectrumResult {
    std::vector<double> eigenvalues;       // of the nonsymmetric L, descending
    std::vector<std::vector<double>> phi;  // right eigenfunctions, full grid
    std::vector<std::vector<double>> psi;  // adjoint eigenfunctions, full grid
    std::vector<double> residuals;         // ||L phi - lambda phi|| / ||phi||, trapezoid norm
    double gap = 0.0;                      // lambda_1 - lambda_2 (when K >= 2)
    double epsilon = 0.0;
    double xi = 0.0;
};

// Finite-volume discretization of the linearized operator about a
// profile U:
//   conservation: L v = eps d/dx(a dv/dx) - d/dx(f'(U) v)
//   reaction:     L v = eps d/dx(a dv/dx) - g'(U) v
// Diffusion uses face-midpoint a, convection a centered face flux.
TridiagonalOperator assemble_linearized(const ProblemSpec& spec,
                                        const std::vector<double>& profile_samples,
                                        double interface_hint);
TridiagonalOperator assemble_linearized(const ProblemSpec& spec, const ApproxSteadyState& member);
TridiagonalOperator assemble_linearized(const ProblemSpec& spec, const ExactSteadyState& steady);

// Surrogate potential W = (1/a)(f'(U)/2)^2 + (eps/2) d/dx f'(U) and the
// exactly symmetric self-adjoint surrogate operator whose spectrum
// equals eps * spectrum(L) for the conservation kind.  d/dx f'(U) is
// formed by centered differences of the f'(U) samples.  For the
// reaction kind the linearization is already self-adjoint: the returned
// potential holds g'(U) and the operator is the symmetrized L itself.
std::pair<PotentialW, TridiagonalOperator> potential_and_selfadjoint(
    const ProblemSpec& spec, const ApproxSteadyState& member);

// K algebraically largest eigenpairs of a symmetric operator
// (Sturm-sequence bisection + inverse iteration); eigenvectors are
// unit-norm with the first nonnegligible component positive.
// Throws std::invalid_argument when op is not marked symmetric.
std::vector<EigenPair> eigen_leading(const TridiagonalOperator& op, std::size_t count,
                                     const EigenOptions& opts = {});

// Leading K eigenpairs of the linearized operator about a family
// member.  Route: symmetrize L exactly by a positive diagonal
// similarity (the discrete counterpart of the exp(S/eps) transform,
// held in log form), eigensolve the symmetric operator, transform
// eigenvectors back.  phi_k has unit trapezoid L2 norm; psi_k is
// rescaled so <psi_k, phi_k> = 1; cross products vanish to rounding.
SpectrumResult spectrum_of_L(const ProblemSpec& spec, const ApproxSteadyState& member,
                             std::size_t count, const EigenOptions& opts = {});
SpectrumResult spectrum_of_L(const ProblemSpec& spec, const ExactSteadyState& steady,
                             std::size_t count, const EigenOptions& opts = {});

struct SpectralThresholds {
    double min_gap = 0.1;        // required lambda_1 - lambda_2
    double max_ratio = 100.0;    // required Omega / |lambda_1|
};

struct SpectralHypothesesReport {
    bool lambda1_negative = false;
    double gap = 0.0;
    bool gap_pass = false;
    bool gap_insufficient_data = false;  // fewer than two eigenvalues
    double alpha_proxy = 0.0;            // -eps * lambda_2
    double residual_to_lambda1_ratio = 0.0;
    bool ratio_pass = false;
    bool all_pass() const {
        return lambda1_negative && (gap_insufficient_data || gap_pass) && ratio_pass;
    }
};

// Checks the spectral-structure hypotheses (negative first eigenvalue,
// gap to the second, residual mass controlled by |lambda_1|).
SpectralHypothesesReport check_spectral_hypotheses(const SpectrumResult& result, SignedLog omega,
                                                   const SpectralThresholds& thresholds = {});

// Diagnostics of the potential well V = W + eps*lambda around the
// interface: monotonicity on each side, sign at the interface and at
// the boundary, and the two sign-change abscissae when they exist.
struct PotentialWellReport {
    double lambda_used = 0.0;
    // the lemma regime requires eps*lambda > -alpha0^2 / (4 max a)
    bool hypothesis_applicable = false;
    double hypothesis_margin = 0.0;  // eps*lambda + alpha0^2/(4 max a)
    bool two_interior_zeros = false;
    double y_minus = 0.0, y_plus = 0.0;
    bool zeros_bracket_interface = false;
    double max_zero_distance_over_eps = 0.0;  // max |y_pm - xi| / eps
    bool decreasing_left = false;             // V nonincreasing on (-l, xi)
    bool increasing_right = false;            // V nondecreasing on (xi, l)
    bool negative_at_interface = false;       // both one-sided limits < 0
    bool positive_at_boundary = false;        // V(-l) > 0 and V(l) > 0
    double min_away_from_interface = 0.0;     // min V over |x - xi| >= 3 eps
};

PotentialWellReport analyze_potential_well(const ProblemSpec& spec, const ApproxSteadyState& member,
                                           const PotentialW& potential, double lambda);

// Closed-form small-eps approximation of the first adjoint
// eigenfunction (conservation kind), evaluated on the grid nodes and
// normalized to unit maximum.
std::vector<double> adjoint_eigenfunction_limit(const ProblemSpec& spec, double xi);

}  // namespace mfront
