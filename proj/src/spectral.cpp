#include "mfront/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mfront {

namespace {

// dual-cell width around interior grid node gi
double cell(const Grid1D& g, int gi) { return 0.5 * (g.x[gi + 1] - g.x[gi - 1]); }

void append_layer_warning(const ProblemSpec& spec, double interface_hint,
                          std::vector<std::string>& warnings) {
    const auto& fl = spec.flux;
    double width;
    if (fl.kind == FluxKind::conservation) {
        const double slope =
            std::min(std::abs(fl.fp_at(fl.u_minus)), std::abs(fl.fp_at(fl.u_plus)));
        width = 4.0 * spec.epsilon * spec.diffusion(interface_hint) / std::max(slope, 1e-12);
    } else {
        const double stiff = std::max(
            {std::abs(fl.f_prime(fl.u_minus)), std::abs(fl.f_prime(fl.u_plus)), 1e-12});
        width = 4.0 * std::sqrt(spec.epsilon * spec.diffusion(interface_hint) / stiff);
    }
    int inside = 0;
    for (double x : spec.grid.x)
        if (std::abs(x - interface_hint) <= 0.5 * width) ++inside;
    if (inside < 5) {
        std::ostringstream os;
        os << "only " << inside << " nodes across the internal layer (width ~ " << width
           << "); operator entries under-resolve the profile";
        warnings.push_back(os.str());
    }
}

}  // namespace

TridiagonalOperator assemble_linearized(const ProblemSpec& spec,
                                        const std::vector<double>& U, double interface_hint) {
    const Grid1D& g = spec.grid;
    const int n = g.n();
    if (static_cast<int>(U.size()) != n)
        throw std::invalid_argument("assemble_linearized: profile sample count != grid size");
    const int m = n - 2;
    if (m < 1) throw std::invalid_argument("assemble_linearized: grid has no interior nodes");

    TridiagonalOperator op;
    op.epsilon = spec.epsilon;
    op.kind = OperatorKind::linearized;
    op.symmetric = false;
    op.matrix.diag.assign(m, 0.0);
    op.matrix.lower.assign(m > 1 ? m - 1 : 0, 0.0);
    op.matrix.upper.assign(m > 1 ? m - 1 : 0, 0.0);

    const bool conservation = spec.flux.kind == FluxKind::conservation;
    for (int k = 0; k < m; ++k) {
        const int gi = k + 1;
        const double c = cell(g, gi);
        const double hl = g.x[gi] - g.x[gi - 1];
        const double hr = g.x[gi + 1] - g.x[gi];
        const double aL = spec.diffusion(0.5 * (g.x[gi - 1] + g.x[gi]));
        const double aR = spec.diffusion(0.5 * (g.x[gi] + g.x[gi + 1]));
        double diag = -spec.epsilon * (aR / hr + aL / hl) / c;
        double lower = spec.epsilon * aL / (hl * c);
        double upper = spec.epsilon * aR / (hr * c);
        if (conservation) {
            const double cfL = spec.flux.fp_at(0.5 * (U[gi - 1] + U[gi]));
            const double cfR = spec.flux.fp_at(0.5 * (U[gi] + U[gi + 1]));
            diag -= 0.5 * (cfR - cfL) / c;
            lower += 0.5 * cfL / c;
            upper -= 0.5 * cfR / c;
        } else {
            diag -= spec.flux.f_prime(U[gi]);
        }
        op.matrix.diag[k] = diag;
        if (k > 0) op.matrix.lower[k - 1] = lower;
        if (k < m - 1) op.matrix.upper[k] = upper;
    }
    append_layer_warning(spec, interface_hint, op.warnings);
    return op;
}

TridiagonalOperator assemble_linearized(const ProblemSpec& spec, const ApproxSteadyState& member) {
    return assemble_linearized(spec, member.profile, member.xi);
}

TridiagonalOperator assemble_linearized(const ProblemSpec& spec, const ExactSteadyState& steady) {
    return assemble_linearized(spec, steady.profile, steady.x_star);
}

std::pair<PotentialW, TridiagonalOperator> potential_and_selfadjoint(
    const ProblemSpec& spec, const ApproxSteadyState& member) {
    const Grid1D& g = spec.grid;
    const int n = g.n();
    const int m = n - 2;
    const double eps = spec.epsilon;
    const bool conservation = spec.flux.kind == FluxKind::conservation;

    PotentialW pot;
    pot.interface = member.xi;
    pot.values.assign(n, 0.0);
    if (conservation) {
        std::vector<double> cf(n);
        for (int i = 0; i < n; ++i) cf[i] = spec.flux.fp_at(member.profile[i]);
        for (int i = 0; i < n; ++i) {
            double dcf;
            if (i == 0)
                dcf = (cf[1] - cf[0]) / (g.x[1] - g.x[0]);
            else if (i == n - 1)
                dcf = (cf[n - 1] - cf[n - 2]) / (g.x[n - 1] - g.x[n - 2]);
            else
                dcf = (cf[i + 1] - cf[i - 1]) / (g.x[i + 1] - g.x[i - 1]);
            const double half_fp = 0.5 * cf[i];
            pot.values[i] = half_fp * half_fp / spec.diffusion(g.x[i]) + 0.5 * eps * dcf;
        }
        // one-sided limits at the match point: the profile derivative there
        // is (f(u*) - kappa_pm) / (eps a), and f(u*) = 0 by normalization
        const double axi = spec.diffusion(member.xi);
        const double fpstar = spec.flux.fp_at(member.match_value);
        const double fppstar = spec.flux.f_second(member.match_value);
        const double base = 0.25 * fpstar * fpstar / axi;
        pot.at_interface_left = base - 0.5 * fppstar * member.kappa_minus / axi;
        pot.at_interface_right = base - 0.5 * fppstar * member.kappa_plus / axi;
    } else {
        for (int i = 0; i < n; ++i) pot.values[i] = spec.flux.f_prime(member.profile[i]);
        pot.at_interface_left = spec.flux.f_prime(member.match_value);
        pot.at_interface_right = pot.at_interface_left;
    }

    // exactly symmetric assembly in the sqrt(cell-width)-scaled frame
    TridiagonalOperator op;
    op.epsilon = eps;
    op.kind = conservation ? OperatorKind::surrogate : OperatorKind::linearized;
    op.symmetric = true;
    op.matrix.diag.assign(m, 0.0);
    op.matrix.lower.assign(m > 1 ? m - 1 : 0, 0.0);
    op.matrix.upper.assign(m > 1 ? m - 1 : 0, 0.0);
    const double principal = conservation ? eps * eps : eps;
    for (int k = 0; k < m; ++k) {
        const int gi = k + 1;
        const double c = cell(g, gi);
        const double hl = g.x[gi] - g.x[gi - 1];
        const double hr = g.x[gi + 1] - g.x[gi];
        const double aL = spec.diffusion(0.5 * (g.x[gi - 1] + g.x[gi]));
        const double aR = spec.diffusion(0.5 * (g.x[gi] + g.x[gi + 1]));
        op.matrix.diag[k] = -principal * (aR / hr + aL / hl) / c - pot.values[gi];
        if (k < m - 1) {
            const double cnext = cell(g, gi + 1);
            const double off = principal * aR / (hr * std::sqrt(c * cnext));
            op.matrix.upper[k] = off;
            op.matrix.lower[k] = off;
        }
    }
    return {pot, op};
}

std::vector<EigenPair> eigen_leading(const TridiagonalOperator& op, std::size_t count,
                                     const EigenOptions& opts) {
    if (!op.symmetric)
        throw std::invalid_argument("eigen_leading: operator is not symmetric by construction");
    SymmetricTridiagonal S;
    S.diag = op.matrix.diag;
    S.off = op.matrix.upper;
    return largest_eigenpairs(S, count, opts);
}

namespace {

SpectrumResult spectrum_impl(const ProblemSpec& spec, const std::vector<double>& profile,
                             double interface_abscissa, std::size_t count,
                             const EigenOptions& opts) {
    const Grid1D& g = spec.grid;
    const int n = g.n();
    const int m = n - 2;
    count = std::min<std::size_t>(count, static_cast<std::size_t>(m));
    const bool conservation = spec.flux.kind == FluxKind::conservation;

    TridiagonalOperator L = assemble_linearized(spec, profile, interface_abscissa);
    for (int k = 0; k + 1 < m; ++k) {
        if (!(L.matrix.lower[k] * L.matrix.upper[k] > 0.0)) {
            std::ostringstream os;
            os << "local Peclet number |f'(U)| h / (eps a) reaches 2 between nodes " << k + 1
               << " and " << k + 2 << "; refine the grid or increase epsilon";
            throw std::domain_error(os.str());
        }
    }
    BalancedForm bf = balance_to_symmetric(L.matrix);

    // surrogate operator actually handed to the eigensolver; for the
    // conservation kind its eigenvalues are eps * sigma(L)
    TridiagonalOperator N;
    N.epsilon = spec.epsilon;
    N.kind = conservation ? OperatorKind::surrogate : OperatorKind::linearized;
    N.symmetric = true;
    const double scale = conservation ? spec.epsilon : 1.0;
    N.matrix.diag.resize(m);
    N.matrix.lower.resize(m > 1 ? m - 1 : 0);
    N.matrix.upper.resize(m > 1 ? m - 1 : 0);
    for (int i = 0; i < m; ++i) N.matrix.diag[i] = scale * bf.sym.diag[i];
    for (int i = 0; i + 1 < m; ++i) {
        N.matrix.upper[i] = scale * bf.sym.off[i];
        N.matrix.lower[i] = scale * bf.sym.off[i];
    }
    std::vector<EigenPair> raw = eigen_leading(N, count, opts);

    double lo = bf.log_d[0], hi = bf.log_d[0];
    for (double v : bf.log_d) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double shift = 0.5 * (lo + hi);
    if (0.5 * (hi - lo) > 600.0)
        throw std::runtime_error(
            "similarity transform overflows double range: epsilon too small for eigenfunction "
            "recovery on this grid");

    SpectrumResult out;
    out.epsilon = spec.epsilon;
    out.xi = interface_abscissa;
    out.eigenvalues.reserve(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const std::vector<double>& w = raw[k].vector;
        std::vector<double> phi(n, 0.0), psi(n, 0.0);
        for (int i = 0; i < m; ++i) {
            const double e = bf.log_d[i] - shift;
            phi[i + 1] = w[i] * std::exp(e);
            psi[i + 1] = w[i] * std::exp(-e) / cell(g, i + 1);
        }
        const double nphi = l2_norm(g, phi);
        if (!(nphi > 0.0)) throw std::runtime_error("spectrum_of_L: null eigenvector");
        double flip = 1.0;
        double amax = 0.0;
        for (int i = 1; i + 1 < n; ++i)
            if (std::abs(phi[i]) > amax) {
                amax = std::abs(phi[i]);
                flip = phi[i] < 0.0 ? -1.0 : 1.0;
            }
        for (int i = 1; i + 1 < n; ++i) phi[i] *= flip / nphi;
        for (int i = 1; i + 1 < n; ++i) psi[i] *= flip;
        const double pairing = inner_product(g, psi, phi);
        if (!(std::abs(pairing) > 0.0))
            throw std::runtime_error("spectrum_of_L: degenerate eigenfunction pairing");
        for (int i = 1; i + 1 < n; ++i) psi[i] /= pairing;

        const double lambda = raw[k].value / scale;
        // residual against the nonsymmetric discrete L, trapezoid norm
        std::vector<double> interior(phi.begin() + 1, phi.end() - 1);
        std::vector<double> Lphi_int = L.matrix.apply(interior);
        std::vector<double> res(n, 0.0);
        for (int i = 0; i < m; ++i) res[i + 1] = Lphi_int[i] - lambda * interior[i];
        out.eigenvalues.push_back(lambda);
        out.residuals.push_back(l2_norm(g, res));
        out.phi.push_back(std::move(phi));
        out.psi.push_back(std::move(psi));
    }
    out.gap = out.eigenvalues.size() >= 2 ? out.eigenvalues[0] - out.eigenvalues[1] : 0.0;
    return out;
}

}  // namespace

SpectrumResult spectrum_of_L(const ProblemSpec& spec, const ApproxSteadyState& member,
                             std::size_t count, const EigenOptions& opts) {
    return spectrum_impl(spec, member.profile, member.xi, count, opts);
}

SpectrumResult spectrum_of_L(const ProblemSpec& spec, const ExactSteadyState& steady,
                             std::size_t count, const EigenOptions& opts) {
    return spectrum_impl(spec, steady.profile, steady.x_star, count, opts);
}

SpectralHypothesesReport check_spectral_hypotheses(const SpectrumResult& result, SignedLog omega,
                                                   const SpectralThresholds& thresholds) {
    SpectralHypothesesReport rep;
    if (result.eigenvalues.empty()) return rep;
    const double l1 = result.eigenvalues[0];
    rep.lambda1_negative = l1 < 0.0;
    if (result.eigenvalues.size() >= 2) {
        rep.gap = l1 - result.eigenvalues[1];
        rep.gap_pass = rep.gap >= thresholds.min_gap;
        rep.alpha_proxy = -result.epsilon * result.eigenvalues[1];
    } else {
        rep.gap_insufficient_data = true;
    }
    if (omega.is_zero()) {
        rep.residual_to_lambda1_ratio = 0.0;
        rep.ratio_pass = true;
    } else if (l1 == 0.0) {
        rep.residual_to_lambda1_ratio = std::numeric_limits<double>::infinity();
        rep.ratio_pass = false;
    } else {
        rep.residual_to_lambda1_ratio = std::exp(omega.log_abs - std::log(std::abs(l1)));
        rep.ratio_pass = rep.residual_to_lambda1_ratio <= thresholds.max_ratio;
    }
    return rep;
}

PotentialWellReport analyze_potential_well(const ProblemSpec& spec,
                                           const ApproxSteadyState& member,
                                           const PotentialW& potential, double lambda) {
    const Grid1D& g = spec.grid;
    const int n = g.n();
    const double eps = spec.epsilon;
    const double xi = member.xi;
    PotentialWellReport rep;
    rep.lambda_used = lambda;

    const double alpha0 = std::min(std::abs(spec.flux.fp_at(spec.flux.u_minus)),
                                   std::abs(spec.flux.fp_at(spec.flux.u_plus)));
    const double beta_bar = spec.diffusion.beta > 0.0 ? spec.diffusion.beta : 1.0;
    rep.hypothesis_margin = eps * lambda + 0.25 * alpha0 * alpha0 / beta_bar;
    rep.hypothesis_applicable = rep.hypothesis_margin > 0.0;

    std::vector<double> V(n);
    for (int i = 0; i < n; ++i) V[i] = potential.values[i] + eps * lambda;

    std::vector<double> zeros;
    for (int i = 0; i + 1 < n; ++i) {
        if (V[i] == 0.0) continue;
        if (V[i] * V[i + 1] < 0.0) {
            const double t = V[i] / (V[i] - V[i + 1]);
            zeros.push_back(g.x[i] + t * (g.x[i + 1] - g.x[i]));
        }
    }
    rep.two_interior_zeros = zeros.size() == 2;
    if (!zeros.empty()) {
        rep.y_minus = zeros.front();
        rep.y_plus = zeros.back();
        rep.zeros_bracket_interface = rep.y_minus < xi && xi < rep.y_plus;
        rep.max_zero_distance_over_eps =
            std::max(std::abs(rep.y_minus - xi), std::abs(rep.y_plus - xi)) / eps;
    }

    // monotonicity on either side of the interface; nodes within a few cells
    // of the match point are excluded (centered differencing smears the kink)
    const double guard = 3.0 * g.min_cell_width_near(xi, 5.0 * eps);
    double vmax = 0.0;
    for (double v : V) vmax = std::max(vmax, std::abs(v));
    const double slack = 1e-10 * vmax;
    bool dec = true, inc = true;
    for (int i = 0; i + 1 < n; ++i) {
        if (g.x[i + 1] <= xi - guard && V[i + 1] > V[i] + slack) dec = false;
        if (g.x[i] >= xi + guard && V[i + 1] < V[i] - slack) inc = false;
    }
    rep.decreasing_left = dec;
    rep.increasing_right = inc;
    rep.negative_at_interface = (potential.at_interface_left + eps * lambda < 0.0) &&
                                (potential.at_interface_right + eps * lambda < 0.0);
    rep.positive_at_boundary = V[0] > 0.0 && V[n - 1] > 0.0;

    double min_away = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        if (std::abs(g.x[i] - xi) >= 3.0 * eps) min_away = std::min(min_away, V[i]);
    rep.min_away_from_interface = min_away;
    return rep;
}

std::vector<double> adjoint_eigenfunction_limit(const ProblemSpec& spec, double xi) {
    if (spec.flux.kind != FluxKind::conservation)
        throw std::domain_error(
            "adjoint_eigenfunction_limit: closed form exists for the conservation kind only");
    const Grid1D& g = spec.grid;
    const int n = g.n();
    const double eps = spec.epsilon;
    BCoordinate b(spec);
    const double btot = b.total();
    const double bxi = b.value(xi);
    const double fpm = spec.flux.fp_at(spec.flux.u_minus);  // > 0
    const double fpp = spec.flux.fp_at(spec.flux.u_plus);   // < 0
    if (!(fpm > 0.0) || !(fpp < 0.0))
        throw std::domain_error(
            "adjoint_eigenfunction_limit: characteristic speeds do not enter the domain");

    const double left_at_xi = -std::expm1(-fpm * bxi / eps);
    const double right_at_xi = -std::expm1(fpp * (btot - bxi) / eps);
    std::vector<double> out(n);
    double vmax = 0.0;
    for (int i = 0; i < n; ++i) {
        const double bx = b.value(g.x[i]);
        const double v = (g.x[i] < xi) ? right_at_xi * (-std::expm1(-fpm * bx / eps))
                                       : left_at_xi * (-std::expm1(fpp * (btot - bx) / eps));
        out[i] = v;
        vmax = std::max(vmax, std::abs(v));
    }
    if (vmax > 0.0)
        for (double& v : out) v /= vmax;
    return out;
}

}  // namespace mfront
