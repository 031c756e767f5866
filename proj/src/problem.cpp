#include "mfront/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mfront {

namespace {

// Bisection for a continuous scalar function with a sign change on [lo, hi].
double bisect(const std::function<double(double)>& fn, double lo, double hi, double flo,
              int iterations) {
    for (int it = 0; it < iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

FluxSpec FluxSpec::conservation(Polynomial flux, double u_minus, double u_plus) {
    if (!(u_minus > u_plus))
        throw std::invalid_argument("FluxSpec: boundary states must satisfy u_minus > u_plus");
    FluxSpec s;
    s.kind = FluxKind::conservation;
    s.u_minus = u_minus;
    s.u_plus = u_plus;
    Polynomial fp = flux.derivative();
    // u_star is the minimiser of f between the boundary states; it exists and
    // is unique whenever the characteristic-sign hypothesis holds.  If it does
    // not, fall back to the midpoint and let validate_hypotheses report.
    double us = 0.5 * (u_minus + u_plus);
    const double fpm = fp(u_plus), fpp_ = fp(u_minus);
    if (fpm < 0.0 && fpp_ > 0.0) {
        double lo = u_plus, hi = u_minus, flo = fpm;
        us = bisect([&fp](double u) { return fp(u); }, lo, hi, flo, 200);
    }
    s.u_star = us;
    s.normalization_shift = -flux(us);
    s.f = flux.shifted_by_constant(s.normalization_shift);
    s.f_prime = s.f.derivative();
    s.f_second = s.f_prime.derivative();
    return s;
}

FluxSpec FluxSpec::reaction(Polynomial source, double u_minus, double u_plus) {
    if (!(u_minus > u_plus))
        throw std::invalid_argument("FluxSpec: boundary states must satisfy u_minus > u_plus");
    FluxSpec s;
    s.kind = FluxKind::reaction;
    s.u_minus = u_minus;
    s.u_plus = u_plus;
    s.f = std::move(source);
    s.f_prime = s.f.derivative();
    s.f_second = s.f_prime.derivative();
    // Middle zero of g strictly between the boundary states.
    const int samples = 2048;
    const double span = u_minus - u_plus;
    std::vector<double> zeros;
    double prev_u = u_plus + 1e-9 * span;
    double prev_g = s.f(prev_u);
    if (prev_g == 0.0) zeros.push_back(prev_u);
    for (int i = 1; i <= samples; ++i) {
        const double u = u_plus + span * (1e-9 + (1.0 - 2e-9) * i / samples);
        const double gu = s.f(u);
        // a zero landing exactly on a sample counts once, not as a sign change
        if (gu == 0.0) zeros.push_back(u);
        else if (prev_g != 0.0 && (prev_g < 0.0) != (gu < 0.0))
            zeros.push_back(bisect([&s](double v) { return s.f(v); }, prev_u, u, prev_g, 200));
        prev_u = u;
        prev_g = gu;
    }
    if (zeros.size() != 1)
        throw std::invalid_argument(
            "FluxSpec: reaction source must have exactly one zero strictly between the "
            "boundary states");
    s.u_star = zeros.front();
    return s;
}

FluxSpec FluxSpec::burgers(double u_minus, double u_plus) {
    return conservation(Polynomial({0.0, 0.0, 0.5}), u_minus, u_plus);
}

ProblemSpec ProblemSpec::make(double epsilon, Grid1D grid, DiffusionCoefficient diffusion,
                              FluxSpec flux) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("ProblemSpec: epsilon must be positive");
    ProblemSpec spec;
    spec.epsilon = epsilon;
    spec.grid = std::move(grid);
    spec.diffusion = std::move(diffusion);
    spec.flux = std::move(flux);

    bool a_positive = true;
    for (double x : spec.grid.x)
        if (!(spec.diffusion(x) > 0.0)) a_positive = false;
    if (a_positive) {
        const double xs = equilibrium_point(spec);
        const double w = spec.grid.min_cell_width_near(xs, 5.0 * epsilon);
        if (w > epsilon / 10.0) {
            std::ostringstream os;
            os << "grid resolution: min cell width " << w << " near the interface exceeds eps/10 = "
               << epsilon / 10.0;
            spec.warnings.push_back(os.str());
        }
    } else {
        spec.warnings.push_back("diffusion coefficient is not positive on the mesh");
    }
    return spec;
}

BCoordinate::BCoordinate(const ProblemSpec& spec) : grid_(&spec.grid) {
    const SpatialFunction& a = spec.diffusion.a;
    inv_a_ = [a](double x) {
        const double ax = a(x);
        if (!(ax > 0.0)) {
            std::ostringstream os;
            os << "b_integral: diffusion coefficient not positive at x = " << x;
            throw std::domain_error(os.str());
        }
        return 1.0 / ax;
    };
    const int n = grid_->n();
    prefix_.resize(n);
    prefix_[0] = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double xl = grid_->x[i], xr = grid_->x[i + 1];
        const double w = xr - xl;
        prefix_[i + 1] = prefix_[i] +
                         (w / 6.0) * (inv_a_(xl) + 4.0 * inv_a_(0.5 * (xl + xr)) + inv_a_(xr));
    }
}

double BCoordinate::value(double x) const {
    const double ell = grid_->ell;
    const double slack = 1e-9 * ell;
    if (x < -ell - slack || x > ell + slack)
        throw std::domain_error("b_integral: abscissa outside [-ell, ell]");
    x = std::clamp(x, -ell, ell);
    const auto it = std::upper_bound(grid_->x.begin(), grid_->x.end(), x);
    int i = static_cast<int>(it - grid_->x.begin()) - 1;
    i = std::clamp(i, 0, grid_->n() - 2);
    const double xl = grid_->x[i];
    const double w = x - xl;
    if (w == 0.0) return prefix_[i];
    return prefix_[i] + (w / 6.0) * (inv_a_(xl) + 4.0 * inv_a_(xl + 0.5 * w) + inv_a_(x));
}

double BCoordinate::inverse(double target) const {
    if (target < -1e-12 * total() || target > total() * (1.0 + 1e-12))
        throw std::domain_error("BCoordinate::inverse: target outside [0, b(ell)]");
    double lo = -grid_->ell, hi = grid_->ell;
    for (int it = 0; it < 120 && hi - lo > 1e-16 * grid_->ell; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (value(mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double b_integral(const ProblemSpec& spec, double x) { return BCoordinate(spec).value(x); }

double equilibrium_point(const ProblemSpec& spec) {
    const BCoordinate b(spec);
    const double target = 0.5 * b.total();

    // The half-mass level must be crossed exactly once; more than one nodal
    // sign change means b is not monotone, i.e. the problem lost ellipticity.
    int crossings = 0;
    double prev = b.value(spec.grid.x.front()) - target;
    for (int i = 1; i < spec.grid.n(); ++i) {
        const double cur = b.value(spec.grid.x[i]) - target;
        if ((prev < 0.0) != (cur < 0.0)) ++crossings;
        prev = cur;
    }
    if (crossings != 1)
        throw std::runtime_error("equilibrium_point: no unique steady interface on this mesh");

    const double tol = 1e-10 * b.total();
    double lo = -spec.grid.ell, hi = spec.grid.ell;
    double xm = 0.0;
    for (int it = 0; it < 200; ++it) {
        xm = 0.5 * (lo + hi);
        const double r = b.value(xm) - target;
        if (std::fabs(r) <= tol) return xm;
        if (r < 0.0) lo = xm;
        else hi = xm;
    }
    throw std::runtime_error("equilibrium_point: bisection did not reach tolerance");
}

bool HypothesesReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const HypothesisCheck* HypothesesReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

HypothesesReport validate_hypotheses(const ProblemSpec& spec) {
    HypothesesReport report;
    const double tol = 1e-12;

    // Ellipticity: sample a at nodes and midpoints against the declared window.
    {
        double amin = spec.diffusion(spec.grid.x[0]);
        double amax = amin;
        for (int i = 0; i < spec.grid.n(); ++i) {
            const double v = spec.diffusion(spec.grid.x[i]);
            amin = std::min(amin, v);
            amax = std::max(amax, v);
            if (i + 1 < spec.grid.n()) {
                const double vm = spec.diffusion(0.5 * (spec.grid.x[i] + spec.grid.x[i + 1]));
                amin = std::min(amin, vm);
                amax = std::max(amax, vm);
            }
        }
        HypothesisCheck c;
        c.name = "ellipticity";
        const double scale = std::max(1.0, std::fabs(spec.diffusion.alpha));
        c.pass = spec.diffusion.alpha > 0.0 && amin >= spec.diffusion.alpha - tol * scale &&
                 amax <= spec.diffusion.beta + tol * scale;
        c.margin = std::min(amin - spec.diffusion.alpha, spec.diffusion.beta - amax);
        std::ostringstream os;
        os << "sampled a in [" << amin << ", " << amax << "], declared [" << spec.diffusion.alpha
           << ", " << spec.diffusion.beta << "]";
        c.detail = os.str();
        report.checks.push_back(std::move(c));
    }

    // Derivative bound on a (finiteness check; the theory only needs a'
    // bounded on the closed interval).
    {
        double dmax = 0.0;
        for (double x : spec.grid.x) dmax = std::max(dmax, std::fabs(spec.diffusion.deriv(x)));
        HypothesisCheck c;
        c.name = "coefficient_derivative_bound";
        c.pass = std::isfinite(dmax);
        c.margin = dmax;
        std::ostringstream os;
        os << "max |a'| = " << dmax;
        c.detail = os.str();
        report.checks.push_back(std::move(c));
    }

    const FluxSpec& fx = spec.flux;
    {
        HypothesisCheck c;
        c.name = "entropic_ordering";
        c.pass = fx.u_minus > fx.u_plus;
        c.margin = fx.u_minus - fx.u_plus;
        c.detail = "requires u_minus > u_plus";
        report.checks.push_back(std::move(c));
    }

    if (fx.kind == FluxKind::conservation) {
        const double span = fx.u_minus - fx.u_plus;
        const double lo = fx.u_plus - 0.1 * span, hi = fx.u_minus + 0.1 * span;
        double c0 = fx.f_second(lo);
        for (int i = 0; i <= 512; ++i)
            c0 = std::min(c0, fx.f_second(lo + (hi - lo) * i / 512.0));
        {
            HypothesisCheck c;
            c.name = "uniform_convexity";
            c.pass = c0 > 0.0;
            c.margin = c0;
            std::ostringstream os;
            os << "min f'' = " << c0 << " on [" << lo << ", " << hi << "]";
            c.detail = os.str();
            report.checks.push_back(std::move(c));
        }
        {
            HypothesisCheck c;
            c.name = "characteristic_signs";
            const double fpp_ = fx.f_prime(fx.u_plus), fpm = fx.f_prime(fx.u_minus);
            c.pass = fpp_ < 0.0 && fpm > 0.0;
            c.margin = std::min(-fpp_, fpm);
            std::ostringstream os;
            os << "f'(u_plus) = " << fpp_ << ", f'(u_minus) = " << fpm;
            c.detail = os.str();
            report.checks.push_back(std::move(c));
        }
        {
            HypothesisCheck c;
            c.name = "equal_flux_levels";
            const double diff = std::fabs(fx.f(fx.u_plus) - fx.f(fx.u_minus));
            const double scale = std::max(1.0, std::fabs(fx.f(fx.u_minus)));
            c.pass = diff <= 1e-12 * scale;
            c.margin = 1e-12 * scale - diff;
            std::ostringstream os;
            os << "|f(u_plus) - f(u_minus)| = " << diff;
            c.detail = os.str();
            report.checks.push_back(std::move(c));
        }
        {
            HypothesisCheck c;
            c.name = "flux_normalization";
            const double v = std::fabs(fx.f(fx.u_star));
            c.pass = v <= 1e-12 * std::max(1.0, std::fabs(fx.f(fx.u_minus)));
            c.margin = -v;
            std::ostringstream os;
            os << "f(u_star) = " << fx.f(fx.u_star) << " after shift " << fx.normalization_shift;
            c.detail = os.str();
            report.checks.push_back(std::move(c));
        }
    } else {
        // Bistable source: zeros at the boundary states with positive slope
        // (so the far fields relax), one middle zero with negative slope.
        {
            HypothesisCheck c;
            c.name = "bistable_source";
            const double gm = fx.f(fx.u_minus), gp = fx.f(fx.u_plus);
            const double dgm = fx.f_prime(fx.u_minus), dgp = fx.f_prime(fx.u_plus);
            c.pass = std::fabs(gm) <= 1e-10 && std::fabs(gp) <= 1e-10 && dgm > 0.0 && dgp > 0.0;
            c.margin = std::min(dgm, dgp);
            std::ostringstream os;
            os << "g(u_minus) = " << gm << ", g(u_plus) = " << gp << ", g'(u_minus) = " << dgm
               << ", g'(u_plus) = " << dgp;
            c.detail = os.str();
            report.checks.push_back(std::move(c));
        }
        {
            HypothesisCheck c;
            c.name = "middle_zero";
            const double slope = fx.f_prime(fx.u_star);
            c.pass = fx.u_star > fx.u_plus && fx.u_star < fx.u_minus && slope < 0.0;
            c.margin = -slope;
            std::ostringstream os;
            os << "u_star = " << fx.u_star << ", g'(u_star) = " << slope;
            c.detail = os.str();
            report.checks.push_back(std::move(c));
        }
    }

    // Resolution guard (warning-grade): layer width is O(eps), so the mesh
    // should resolve it with at least ten cells.
    {
        HypothesisCheck c;
        c.name = "grid_resolution";
        double w = spec.grid.min_cell_width();
        bool near_ok = true;
        try {
            const double xs = equilibrium_point(spec);
            w = spec.grid.min_cell_width_near(xs, 5.0 * spec.epsilon);
        } catch (const std::exception&) {
            near_ok = false;
        }
        c.pass = near_ok && w <= spec.epsilon / 10.0;
        c.margin = spec.epsilon / 10.0 - w;
        std::ostringstream os;
        os << "min cell width near interface = " << w << ", eps/10 = " << spec.epsilon / 10.0;
        c.detail = os.str();
        report.checks.push_back(std::move(c));
    }

    return report;
}

void require_hypotheses(const ProblemSpec& spec) {
    static const char* hard[] = {"ellipticity",           "entropic_ordering",
                                 "uniform_convexity",     "characteristic_signs",
                                 "equal_flux_levels",     "bistable_source",
                                 "middle_zero"};
    const HypothesesReport report = validate_hypotheses(spec);
    std::string failed;
    for (const auto& c : report.checks) {
        bool is_hard = false;
        for (const char* name : hard)
            if (c.name == name) is_hard = true;
        if (is_hard && !c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    if (!failed.empty())
        throw std::domain_error("problem hypotheses violated: " + failed);
}

}  // namespace mfront
