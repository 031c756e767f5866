#include "mfront/steady.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace mfront {

namespace {

using Rhs = std::function<double(double, double)>;

double rk4_step(const Rhs& rhs, double x, double u, double h) {
    const double k1 = rhs(x, u);
    const double k2 = rhs(x + 0.5 * h, u + 0.5 * h * k1);
    const double k3 = rhs(x + 0.5 * h, u + 0.5 * h * k2);
    const double k4 = rhs(x + h, u + h * k3);
    return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrate u' = rhs from (x0, u0) and record u at the given abscissae,
// which must be sorted moving away from x0 (ascending or descending).
void sample_along(const Rhs& rhs, double x0, double u0, const std::vector<double>& xs,
                  std::vector<double>& out) {
    double x = x0, u = u0;
    out.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        u = rk4_step(rhs, x, u, xs[i] - x);
        x = xs[i];
        out[i] = u;
    }
}

void check_boundary(double got, double want, double span, const char* where) {
    if (std::fabs(got - want) > 1e-8 * span) {
        std::ostringstream os;
        os << "steady profile: boundary value mismatch at " << where << " ("
           << got << " vs " << want << "); refine the grid or enlarge n";
        throw std::runtime_error(os.str());
    }
}

// Second-order stationary branch for the reaction kind, integrated as a
// first-order system from the match point outward.  Returns the boundary
// value reached for a trial match-point slope.
struct ReactionBranch {
    const ProblemSpec& spec;
    double xi;

    // Integrate from (xi, u_star, slope) to x_end, sampling at xs (sorted
    // away from xi); also returns the final value.
    double integrate(double slope, const std::vector<double>& xs, std::vector<double>* u_out,
                     std::vector<double>* v_out) const {
        const auto& fx = spec.flux;
        const auto& a = spec.diffusion;
        const double eps = spec.epsilon;
        double x = xi, u = fx.u_star, v = slope;
        if (u_out) u_out->resize(xs.size());
        if (v_out) v_out->resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            // Classical RK4 for the system (u, v).
            const double h = xs[i] - x;
            auto f1 = [](double, double, double vv) { return vv; };
            auto f2 = [&](double xx, double uu, double vv) {
                return (fx.f(uu) - eps * a.deriv(xx) * vv) / (eps * a(xx));
            };
            const double k1u = f1(x, u, v), k1v = f2(x, u, v);
            const double k2u = f1(x + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
            const double k2v = f2(x + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
            const double k3u = f1(x + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
            const double k3v = f2(x + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
            const double k4u = f1(x + h, u + h * k3u, v + h * k3v);
            const double k4v = f2(x + h, u + h * k3u, v + h * k3v);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            x = xs[i];
            if (u_out) (*u_out)[i] = u;
            if (v_out) (*v_out)[i] = v;
        }
        return u;
    }
};

}  // namespace

BranchConstant solve_kappa_exact_detail(const ProblemSpec& spec) {
    require_hypotheses(spec);
    if (spec.flux.kind != FluxKind::conservation)
        throw std::domain_error("solve_kappa_exact: defined for the conservation kind only");
    const BCoordinate b(spec);
    const double target = b.total() / spec.epsilon;
    return solve_level_constant(spec.flux.f, spec.flux.f_prime, spec.flux.u_plus,
                                spec.flux.u_minus, target, 1e-12);
}

double solve_kappa_exact(const ProblemSpec& spec) { return solve_kappa_exact_detail(spec).k; }

ExactSteadyState build_exact_steady(const ProblemSpec& spec) {
    require_hypotheses(spec);
    if (spec.flux.kind != FluxKind::conservation)
        throw std::domain_error("build_exact_steady: defined for the conservation kind only");
    const FluxSpec& fx = spec.flux;
    const Grid1D& g = spec.grid;
    const double eps = spec.epsilon;
    const double span = fx.u_minus - fx.u_plus;

    ExactSteadyState out;
    const BranchConstant kc = solve_kappa_exact_detail(spec);
    out.kappa = kc.k;
    out.kappa_excess = kc.delta;
    out.x_star = equilibrium_point(spec);

    const double k = kc.k;
    Rhs rhs = [&](double x, double u) { return (fx.f(u) - k) / (eps * spec.diffusion(x)); };

    out.profile.resize(g.n());
    out.profile[0] = fx.u_minus;
    double u = fx.u_minus;
    for (int i = 0; i + 1 < g.n(); ++i) {
        u = rk4_step(rhs, g.x[i], u, g.x[i + 1] - g.x[i]);
        out.profile[i + 1] = u;
    }
    out.boundary_residual = std::fabs(out.profile.back() - fx.u_plus);
    check_boundary(out.profile.back(), fx.u_plus, span, "x = +ell");

    for (int i = 0; i + 1 < g.n(); ++i)
        if (out.profile[i + 1] > out.profile[i] + 1e-12 * span)
            throw std::runtime_error("steady profile: monotonicity lost; refine the grid");

    out.profile_deriv.resize(g.n());
    for (int i = 0; i < g.n(); ++i) out.profile_deriv[i] = rhs(g.x[i], out.profile[i]);
    return out;
}

ApproxSteadyState build_approx_member(const ProblemSpec& spec, double xi, double band_fraction) {
    require_hypotheses(spec);
    const Grid1D& g = spec.grid;
    const FluxSpec& fx = spec.flux;
    const double eps = spec.epsilon;
    const double band = (1.0 - band_fraction) * g.ell;
    if (!(xi > -band && xi < band)) {
        std::ostringstream os;
        os << "build_approx_member: interface xi = " << xi << " outside the admissible band (|xi| < "
           << band << ")";
        throw std::domain_error(os.str());
    }
    const double span = fx.u_minus - fx.u_plus;

    ApproxSteadyState out;
    out.xi = xi;
    out.match_value = fx.u_star;
    out.profile.resize(g.n());
    out.profile_deriv.resize(g.n());

    // Node partition: indices [0, split) lie left of (or at) the interface.
    int split = 0;
    while (split < g.n() && g.x[split] <= xi) ++split;
    std::vector<double> left_xs(split), right_xs(g.n() - split);
    for (int i = 0; i < split; ++i) left_xs[i] = g.x[split - 1 - i];  // descending from xi
    for (int i = split; i < g.n(); ++i) right_xs[i - split] = g.x[i];

    if (fx.kind == FluxKind::conservation) {
        const BCoordinate b(spec);
        const double b_xi = b.value(xi);
        const BranchConstant left =
            solve_level_constant(fx.f, fx.f_prime, fx.u_star, fx.u_minus, b_xi / eps, 1e-12);
        const BranchConstant right = solve_level_constant(fx.f, fx.f_prime, fx.u_plus, fx.u_star,
                                                          (b.total() - b_xi) / eps, 1e-12);
        out.kappa_minus = left.k;
        out.kappa_plus = right.k;
        out.delta_minus = left.delta;
        out.delta_plus = right.delta;

        auto rhs_for = [&](double k) {
            return Rhs([&spec, &fx, k, eps](double x, double u) {
                return (fx.f(u) - k) / (eps * spec.diffusion(x));
            });
        };
        std::vector<double> lu, ru;
        sample_along(rhs_for(left.k), xi, fx.u_star, left_xs, lu);
        sample_along(rhs_for(right.k), xi, fx.u_star, right_xs, ru);
        for (int i = 0; i < split; ++i) out.profile[split - 1 - i] = lu[i];
        for (int i = split; i < g.n(); ++i) out.profile[i] = ru[i - split];

        if (split > 0) check_boundary(out.profile.front(), fx.u_minus, span, "x = -ell");
        check_boundary(out.profile.back(), fx.u_plus, span, "x = +ell");
        out.boundary_residual = std::max(std::fabs(out.profile.front() - fx.u_minus),
                                         std::fabs(out.profile.back() - fx.u_plus));

        for (int i = 0; i < g.n(); ++i) {
            const double k = (g.x[i] <= xi) ? left.k : right.k;
            out.profile_deriv[i] = (fx.f(out.profile[i]) - k) / (eps * spec.diffusion(g.x[i]));
        }

        // Branch ranges: left stays in [u_star, u_minus], right in
        // [u_plus, u_star], up to integration slack.
        const double slack = 1e-8 * span;
        for (int i = 0; i < split; ++i)
            if (out.profile[i] < fx.u_star - slack || out.profile[i] > fx.u_minus + slack)
                throw std::runtime_error("approx member: left branch left its value range");
        for (int i = split; i < g.n(); ++i)
            if (out.profile[i] > fx.u_star + slack || out.profile[i] < fx.u_plus - slack)
                throw std::runtime_error("approx member: right branch left its value range");

        // [[u']] = (kappa_minus - kappa_plus) / (eps a(xi)).  The difference
        // of the branch constants is formed in log space from the excesses,
        // plus the (rounding-level) gap between the two boundary flux levels.
        SignedLog num = out.delta_minus - out.delta_plus;
        const double base_gap = left.base_level - right.base_level;
        if (base_gap != 0.0) num = num + SignedLog::from_value(base_gap);
        out.jump = num / (eps * spec.diffusion(xi));
    } else {
        // Reaction kind: this family is an extension beyond the convective
        // setting (flagged on the result).  Each branch solves the full
        // second-order stationary equation, shooting on the match slope.
        out.reaction_extension = true;
        ReactionBranch branch{spec, xi};

        // Crude heteroclinic slope scale from the potential drop.
        Polynomial G_poly = [&] {
            std::vector<double> c(fx.f.coeffs().size() + 1, 0.0);
            for (std::size_t j = 0; j < fx.f.coeffs().size(); ++j)
                c[j + 1] = fx.f.coeffs()[j] / static_cast<double>(j + 1);
            return Polynomial(c);
        }();
        const double drop = std::max(std::fabs(G_poly(fx.u_minus) - G_poly(fx.u_star)),
                                     std::fabs(G_poly(fx.u_plus) - G_poly(fx.u_star)));
        const double vscale =
            -std::sqrt(std::max(2.0 * drop / (eps * spec.diffusion(xi)), 1e-30));

        auto shoot = [&](const std::vector<double>& xs, double target) {
            // Monotone in the slope: steeper (more negative) slope overshoots
            // the boundary state.  Bracket then bisect.
            double lo = vscale * 8.0, hi = vscale / 8.0;
            auto miss = [&](double s) {
                const double end = branch.integrate(s, xs, nullptr, nullptr);
                // a blown-up shot always means overshoot past the target state
                if (!std::isfinite(end)) return target > fx.u_star ? 1e300 : -1e300;
                return end - target;
            };
            double flo = miss(lo), fhi = miss(hi);
            int expand = 0;
            while ((flo < 0.0) == (fhi < 0.0)) {
                lo *= 2.0;
                flo = miss(lo);
                if (++expand > 40)
                    throw std::runtime_error("approx member: reaction branch failed to bracket");
            }
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = miss(mid);
                if (std::fabs(fm) <= 1e-10 * span) return mid;
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            throw std::runtime_error("approx member: reaction branch shooting stalled");
        };

        std::vector<double> lu, lv, ru, rv;
        const double sl = left_xs.empty() ? vscale : shoot(left_xs, fx.u_minus);
        const double sr = right_xs.empty() ? vscale : shoot(right_xs, fx.u_plus);
        branch.integrate(sl, left_xs, &lu, &lv);
        branch.integrate(sr, right_xs, &ru, &rv);
        for (int i = 0; i < split; ++i) {
            out.profile[split - 1 - i] = lu[i];
            out.profile_deriv[split - 1 - i] = lv[i];
        }
        for (int i = split; i < g.n(); ++i) {
            out.profile[i] = ru[i - split];
            out.profile_deriv[i] = rv[i - split];
        }
        out.boundary_residual = std::max(
            split > 0 ? std::fabs(out.profile.front() - fx.u_minus) : 0.0,
            std::fabs(out.profile.back() - fx.u_plus));

        // Stationary flux constants at the match point; the same jump formula
        // as the conservation kind then applies.
        out.kappa_minus = -eps * spec.diffusion(xi) * sl;
        out.kappa_plus = -eps * spec.diffusion(xi) * sr;
        out.delta_minus = SignedLog::from_value(out.kappa_minus);
        out.delta_plus = SignedLog::from_value(out.kappa_plus);
        const double j = (out.kappa_minus - out.kappa_plus) / (eps * spec.diffusion(xi));
        out.jump = j == 0.0 ? SignedLog() : SignedLog::from_value(j);
    }
    return out;
}

SignedLog omega_residual_log(const ProblemSpec& spec, const ApproxSteadyState& member) {
    return abs(member.jump) * spec.epsilon;
}

double omega_residual(const ProblemSpec& spec, const ApproxSteadyState& member) {
    return omega_residual_log(spec, member).value();
}

std::vector<double> family_derivative(const ProblemSpec& spec, double xi, double dxi) {
    if (dxi <= 0.0) dxi = std::max(1e-6, 1e-4 * spec.epsilon);
    const ApproxSteadyState lo = build_approx_member(spec, xi - dxi);
    const ApproxSteadyState hi = build_approx_member(spec, xi + dxi);
    std::vector<double> d(lo.profile.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = (hi.profile[i] - lo.profile[i]) / (2.0 * dxi);
    return d;
}

double saturation_state(const FluxSpec& flux, double level, int side) {
    if (flux.kind != FluxKind::conservation)
        throw std::domain_error("saturation_state: conservation kind only");
    const double dir = side < 0 ? 1.0 : -1.0;  // move away from u_star
    double lo = flux.u_star;
    double step = std::max(std::fabs(flux.u_minus - flux.u_plus), 1.0);
    double hi = flux.u_star + dir * step;
    int expand = 0;
    while (flux.f(hi) < level) {
        hi += dir * step;
        if (++expand > 200)
            throw std::runtime_error("saturation_state: level not reached by the flux");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (flux.f(mid) < level) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace mfront
