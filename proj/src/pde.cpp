#include "mfront/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mfront/fit.hpp"
#include "mfront/tridiagonal.hpp"

namespace mfront {

namespace {

double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

double trapezoid_abs(const Grid1D& g, const std::vector<double>& u) {
    double s = 0.0;
    for (int i = 0; i + 1 < g.n(); ++i)
        s += 0.5 * (g.x[i + 1] - g.x[i]) * (std::abs(u[i]) + std::abs(u[i + 1]));
    return s;
}

double trapezoid_sum(const Grid1D& g, const std::vector<double>& u) {
    double s = 0.0;
    for (int i = 0; i + 1 < g.n(); ++i)
        s += 0.5 * (g.x[i + 1] - g.x[i]) * (u[i] + u[i + 1]);
    return s;
}

void fill_caches(const ProblemSpec& spec, PdeState& state) {
    const Grid1D& g = spec.grid;
    const int n = g.n();
    state.face_h.resize(n - 1);
    state.face_a.resize(n - 1);
    state.dual_cell.resize(n - 2);
    for (int j = 0; j + 1 < n; ++j) {
        state.face_h[j] = g.x[j + 1] - g.x[j];
        state.face_a[j] = spec.diffusion(0.5 * (g.x[j] + g.x[j + 1]));
    }
    for (int i = 1; i + 1 < n; ++i) state.dual_cell[i - 1] = 0.5 * (g.x[i + 1] - g.x[i - 1]);
}

}  // namespace

PdeState make_state(const ProblemSpec& spec, std::vector<double> u0) {
    const Grid1D& g = spec.grid;
    if (static_cast<int>(u0.size()) != g.n())
        throw std::invalid_argument("make_state: initial data size does not match the grid");
    const double span = std::abs(spec.flux.u_minus - spec.flux.u_plus);
    const double tol = 1e-6 * std::max(span, 1.0);
    if (std::abs(u0.front() - spec.flux.u_minus) > tol ||
        std::abs(u0.back() - spec.flux.u_plus) > tol)
        throw std::invalid_argument(
            "make_state: initial data does not satisfy the boundary values");
    u0.front() = spec.flux.u_minus;
    u0.back() = spec.flux.u_plus;

    PdeState state;
    state.u = std::move(u0);
    fill_caches(spec, state);
    state.mass_initial = trapezoid_sum(g, state.u);
    return state;
}

double stable_dt(const ProblemSpec& spec, const PdeState& state, const IntegratorConfig& cfg) {
    if (!(cfg.cfl_safety > 0.0) || cfg.cfl_safety > 0.9)
        throw std::invalid_argument("stable_dt: cfl_safety must lie in (0, 0.9]");
    if (cfg.dt > 0.0) return cfg.dt;
    const auto [umin_it, umax_it] = std::minmax_element(state.u.begin(), state.u.end());
    double dt = 0.1;  // accuracy cap when no explicit term constrains the step
    if (spec.flux.kind == FluxKind::conservation) {
        // f' is monotone (f convex), so its extremes sit at the range ends
        const double alpha =
            std::max(std::abs(spec.flux.fp_at(*umin_it)), std::abs(spec.flux.fp_at(*umax_it)));
        const double hmin = spec.grid.min_cell_width();
        if (alpha > 1e-14) dt = std::min(dt, cfg.cfl_safety * hmin / alpha);
    } else {
        double gp_max = 0.0;
        for (double u : state.u) gp_max = std::max(gp_max, std::abs(spec.flux.f_prime(u)));
        if (gp_max > 1e-14) dt = std::min(dt, 0.5 / gp_max);
    }
    return dt;
}

void step(const ProblemSpec& spec, PdeState& state, const IntegratorConfig& cfg, double dt) {
    (void)cfg;
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be positive");
    const Grid1D& g = spec.grid;
    const int n = g.n();
    const int m = n - 2;
    if (static_cast<int>(state.face_h.size()) != n - 1) fill_caches(spec, state);
    const std::vector<double>& u = state.u;
    const double eps = spec.epsilon;
    const bool conservation = spec.flux.kind == FluxKind::conservation;

    // explicit half: convection (reconstructed local Lax-Friedrichs) or source
    std::vector<double> ustar(m);
    std::vector<double> fhat;
    double pred_explicit = 0.0;  // predicted interior mass change of this half
    if (conservation) {
        std::vector<double> slope(n, 0.0);
        for (int i = 1; i + 1 < n; ++i)
            slope[i] = minmod((u[i] - u[i - 1]) / state.face_h[i - 1],
                              (u[i + 1] - u[i]) / state.face_h[i]);
        fhat.resize(n - 1);
        for (int j = 0; j + 1 < n; ++j) {
            const double half = 0.5 * state.face_h[j];
            const double ul = u[j] + slope[j] * half;
            const double ur = u[j + 1] - slope[j + 1] * half;
            const double alpha =
                std::max(std::abs(spec.flux.fp_at(ul)), std::abs(spec.flux.fp_at(ur)));
            fhat[j] = 0.5 * (spec.flux.f_at(ul) + spec.flux.f_at(ur)) - 0.5 * alpha * (ur - ul);
        }
        for (int i = 1; i + 1 < n; ++i)
            ustar[i - 1] = u[i] - dt * (fhat[i] - fhat[i - 1]) / state.dual_cell[i - 1];
        pred_explicit = -dt * (fhat[n - 2] - fhat[0]);
    } else {
        for (int i = 1; i + 1 < n; ++i) {
            const double gu = spec.flux.f_at(u[i]);
            ustar[i - 1] = u[i] - dt * gu;
            pred_explicit -= dt * state.dual_cell[i - 1] * gu;
        }
    }

    for (double v : ustar)
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "pde step: explicit update lost finiteness at t = " << state.t << " (step "
               << state.steps << ")";
            throw BlowUpError(os.str(), state.t);
        }

    // implicit half: backward-Euler finite-volume diffusion, Dirichlet data
    // folded into the right-hand side
    Tridiagonal A;
    A.diag.resize(m);
    A.lower.resize(m > 1 ? m - 1 : 0);
    A.upper.resize(m > 1 ? m - 1 : 0);
    std::vector<double> rhs = ustar;
    for (int i = 1; i + 1 < n; ++i) {
        const int k = i - 1;
        const double c = state.dual_cell[k];
        const double wl = dt * eps * state.face_a[i - 1] / (state.face_h[i - 1] * c);
        const double wr = dt * eps * state.face_a[i] / (state.face_h[i] * c);
        A.diag[k] = 1.0 + wl + wr;
        if (k > 0) A.lower[k - 1] = -wl;
        if (k < m - 1) A.upper[k] = -wr;
        if (i == 1) rhs[k] += wl * u.front();
        if (i == n - 2) rhs[k] += wr * u.back();
    }
    std::vector<double> unew_int = solve_tridiagonal(A, rhs);

    for (double v : unew_int)
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "pde step: solution lost finiteness at t = " << state.t << " (step "
               << state.steps << ")";
            throw BlowUpError(os.str(), state.t);
        }

    // conservation ledger: interior mass change vs the boundary-flux
    // prediction the finite-volume update telescopes to
    double dmass = 0.0;
    for (int k = 0; k < m; ++k) dmass += state.dual_cell[k] * (unew_int[k] - u[k + 1]);
    const double diff_left =
        eps * state.face_a[0] * (unew_int[0] - u.front()) / state.face_h[0];
    const double diff_right =
        eps * state.face_a[n - 2] * (u.back() - unew_int[m - 1]) / state.face_h[n - 2];
    const double pred = pred_explicit + dt * (diff_right - diff_left);
    const double defect = std::abs(dmass - pred) / std::max(1.0, trapezoid_abs(g, u));
    state.max_mass_defect = std::max(state.max_mass_defect, defect);
    state.boundary_influx += pred;

    for (int k = 0; k < m; ++k) state.u[k + 1] = unew_int[k];
    state.u.front() = spec.flux.u_minus;
    state.u.back() = spec.flux.u_plus;
    state.t += dt;
    ++state.steps;
}

namespace {

// u*-crossing of the profile: the unique abscissa where u - u_star changes
// sign, located by linear interpolation.  Grazing touches (zero without a
// sign change) are not crossings.
double crossing_abscissa(const std::vector<double>& u, const ProblemSpec& spec) {
    const Grid1D& g = spec.grid;
    const int n = g.n();
    const double us = spec.flux.u_star;
    int prev_sign = 0, prev_idx = -1, count = 0;
    double cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = u[i] - us;
        const int sg = (s > 0.0) - (s < 0.0);
        if (sg == 0) continue;
        if (prev_sign != 0 && sg != prev_sign) {
            ++count;
            if (i - prev_idx == 1) {
                const double sa = u[prev_idx] - us;
                cross = g.x[prev_idx] + sa / (sa - s) * (g.x[i] - g.x[prev_idx]);
            } else {
                cross = g.x[prev_idx + 1];  // crossing through node-exact zeros
            }
        }
        prev_sign = sg;
        prev_idx = i;
    }
    if (count == 0)
        throw std::domain_error("extract_interface: profile does not cross the match value");
    if (count > 1)
        throw std::domain_error(
            "extract_interface: profile crosses the match value more than once");
    return cross;
}

}  // namespace

InterfaceExtraction extract_interface(const std::vector<double>& u, const ProblemSpec& spec,
                                      SpeedMode mode) {
    const Grid1D& g = spec.grid;
    if (u.size() != static_cast<std::size_t>(g.n()))
        throw std::invalid_argument("extract_interface: profile size does not match the grid");
    const double seed = crossing_abscissa(u, spec);
    const double band = 0.95 * g.ell;
    const double hbar = g.h > 0.0 ? g.h : (2.0 * g.ell / (g.n() - 1));

    InterfaceExtraction out;
    out.xi_hat = seed;
    out.residual = std::numeric_limits<double>::quiet_NaN();
    if (std::abs(seed) > band - 2.0 * hbar) {
        out.degraded = true;  // too close to the admissible-band edge to refine
        return out;
    }

    // projection residual with a unit-L2 adjoint direction (the root does
    // not depend on the normalization)
    auto projection = [&](double xi) {
        const ApproxSteadyState member = build_approx_member(spec, xi);
        std::vector<double> psi;
        if (mode == SpeedMode::fast && spec.flux.kind == FluxKind::conservation)
            psi = adjoint_eigenfunction_limit(spec, xi);
        else
            psi = spectrum_of_L(spec, member, 1).psi[0];
        const double norm = l2_norm(g, psi);
        std::vector<double> v(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] - member.profile[i];
        return inner_product(g, psi, v) / norm;
    };

    // bracket the root around the crossing seed
    double lo = seed, hi = seed;
    double flo = 0.0, fhi = 0.0;
    bool bracketed = false;
    for (double delta = std::max(2.0 * hbar, 1e-3 * g.ell); delta <= 0.4 * g.ell; delta *= 2.0) {
        lo = std::max(seed - delta, -band);
        hi = std::min(seed + delta, band);
        flo = projection(lo);
        fhi = projection(hi);
        if (flo == 0.0) {
            out.xi_hat = lo;
            out.residual = 0.0;
            return out;
        }
        if (fhi == 0.0) {
            out.xi_hat = hi;
            out.residual = 0.0;
            return out;
        }
        if ((flo < 0.0) != (fhi < 0.0)) {
            bracketed = true;
            break;
        }
        if (lo == -band && hi == band) break;
    }
    if (!bracketed) {
        out.degraded = true;  // projection has no sign change near the crossing
        return out;
    }

    // safeguarded secant: a secant step is accepted only when it lands
    // inside the bracket, otherwise bisection keeps the guaranteed progress
    double a = lo, b = hi, fa = flo, fb = fhi;
    const double xtol = 1e-10 * g.ell;
    for (int it = 0; it < 80 && (b - a) > xtol; ++it) {
        double c;
        const double denom = fb - fa;
        if (denom != 0.0) {
            c = b - fb * (b - a) / denom;
            const double margin = 0.01 * (b - a);
            if (!(c > a + margin && c < b - margin)) c = 0.5 * (a + b);
        } else {
            c = 0.5 * (a + b);
        }
        const double fc = projection(c);
        if (fc == 0.0) {
            out.xi_hat = c;
            out.residual = 0.0;
            return out;
        }
        if ((fc < 0.0) == (fa < 0.0)) {
            a = c;
            fa = fc;
        } else {
            b = c;
            fb = fc;
        }
    }
    out.xi_hat = std::abs(fa) < std::abs(fb) ? a : b;
    out.residual = std::min(std::abs(fa), std::abs(fb));
    return out;
}

namespace {

VNorms perturbation_norms(const Grid1D& g, const std::vector<double>& v) {
    VNorms norms;
    norms.l2 = l2_norm(g, v);
    norms.linf = linf_norm(v);
    double h1 = 0.0;
    for (int j = 0; j + 1 < g.n(); ++j) {
        const double d = v[j + 1] - v[j];
        h1 += d * d / (g.x[j + 1] - g.x[j]);
    }
    norms.h1_semi = std::sqrt(h1);
    return norms;
}

Snapshot take_snapshot(const ProblemSpec& spec, const PdeState& state,
                       const IntegratorConfig& cfg) {
    Snapshot snap;
    snap.t = state.t;
    snap.u = state.u;
    const InterfaceExtraction ex = extract_interface(state.u, spec);
    snap.xi_hat = ex.xi_hat;
    snap.xi_residual = ex.residual;
    snap.xi_degraded = ex.degraded;
    if (std::abs(snap.xi_hat) <= 0.95 * spec.grid.ell) {
        const ApproxSteadyState member = build_approx_member(spec, snap.xi_hat);
        std::vector<double> v(state.u.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = state.u[i] - member.profile[i];
        snap.v_norms = perturbation_norms(spec.grid, v);
        if (cfg.projection_modes > 0) {
            const SpectrumResult spectrum =
                spectrum_of_L(spec, member, cfg.projection_modes);
            snap.spectral_coeffs.reserve(spectrum.psi.size());
            for (const auto& psi : spectrum.psi)
                snap.spectral_coeffs.push_back(inner_product(spec.grid, psi, v));
        }
    }
    return snap;
}

}  // namespace

RunResult run_experiment(const ProblemSpec& spec, const std::vector<double>& u0,
                         const IntegratorConfig& cfg) {
    RunResult out;
    PdeState state = make_state(spec, u0);

    // snapshot schedule: t = 0, then log-spaced up to t_end
    std::vector<double> schedule{0.0};
    const double t0 = std::max(cfg.snapshot_t_min, 1e-12);
    const std::size_t count = std::max<std::size_t>(cfg.snapshot_count, 2);
    if (cfg.t_end <= t0) {
        schedule.push_back(cfg.t_end);
    } else {
        const double ratio = std::pow(cfg.t_end / t0, 1.0 / static_cast<double>(count - 1));
        double t = t0;
        for (std::size_t i = 0; i < count; ++i, t *= ratio) schedule.push_back(std::min(t, cfg.t_end));
        schedule.back() = cfg.t_end;
    }

    out.snapshots.push_back(take_snapshot(spec, state, cfg));
    try {
        for (std::size_t s = 1; s < schedule.size(); ++s) {
            const double target = schedule[s];
            while (target - state.t > 1e-9 * std::max(1.0, target)) {
                const double dt = std::min(stable_dt(spec, state, cfg), target - state.t);
                step(spec, state, cfg, dt);
            }
            state.t = target;
            out.snapshots.push_back(take_snapshot(spec, state, cfg));
        }
    } catch (const BlowUpError& e) {
        out.blew_up = true;
        out.blow_up_time = e.time();
    }

    out.trajectory.provenance = TrajectoryProvenance::pde;
    for (const Snapshot& s : out.snapshots) {
        out.trajectory.times.push_back(s.t);
        out.trajectory.xi.push_back(s.xi_hat);
    }
    const double xi_star = equilibrium_point(spec);
    const double d0 = std::abs(out.trajectory.xi.front() - xi_star);
    std::vector<double> ts, lds;
    for (std::size_t i = 0; i < out.trajectory.times.size(); ++i) {
        const double d = std::abs(out.trajectory.xi[i] - xi_star);
        if (d > 0.0 && d <= 0.1 * d0) {
            ts.push_back(out.trajectory.times[i]);
            lds.push_back(std::log(d));
        }
    }
    if (ts.size() >= 3) out.trajectory.beta_fit = -linear_fit(ts, lds).slope;

    out.final_state = std::move(state);
    return out;
}

PerturbationDiagnostics perturbation_diagnostics(const ProblemSpec& spec, const Snapshot& snap,
                                                 const SpectrumResult& spectrum) {
    PerturbationDiagnostics diag;
    const ApproxSteadyState member = build_approx_member(spec, snap.xi_hat);
    std::vector<double> v(snap.u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = snap.u[i] - member.profile[i];
    diag.v_norms = perturbation_norms(spec.grid, v);
    diag.coefficients.reserve(spectrum.psi.size());
    for (const auto& psi : spectrum.psi)
        diag.coefficients.push_back(inner_product(spec.grid, psi, v));

    const double delta = 1e-3 * spec.grid.ell;
    const std::vector<double> psi_p =
        spectrum_of_L(spec, build_approx_member(spec, snap.xi_hat + delta), 1).psi[0];
    const std::vector<double> psi_m =
        spectrum_of_L(spec, build_approx_member(spec, snap.xi_hat - delta), 1).psi[0];
    std::vector<double> dpsi(psi_p.size());
    for (std::size_t i = 0; i < dpsi.size(); ++i) dpsi[i] = (psi_p[i] - psi_m[i]) / (2.0 * delta);
    diag.coupling_psi1 = std::abs(inner_product(spec.grid, dpsi, v));
    return diag;
}

std::vector<double> member_plus_bump(const ProblemSpec& spec, double xi, double amplitude,
                                     double center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("member_plus_bump: width must be positive");
    const ApproxSteadyState member = build_approx_member(spec, xi);
    std::vector<double> u0 = member.profile;
    for (int i = 0; i < spec.grid.n(); ++i) {
        const double z = (spec.grid.x[i] - center) / width;
        u0[i] += amplitude * std::exp(-z * z);
    }
    u0.front() = spec.flux.u_minus;
    u0.back() = spec.flux.u_plus;
    return u0;
}

std::vector<double> smoothed_riemann(const ProblemSpec& spec, double x0, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("smoothed_riemann: width must be positive");
    std::vector<double> u0(spec.grid.n());
    const double um = spec.flux.u_minus, up = spec.flux.u_plus;
    for (int i = 0; i < spec.grid.n(); ++i) {
        const double s = 0.5 * (1.0 + std::tanh((spec.grid.x[i] - x0) / width));
        u0[i] = um + (up - um) * s;
    }
    u0.front() = um;
    u0.back() = up;
    return u0;
}

}  // namespace mfront
