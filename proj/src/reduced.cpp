#include "mfront/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mfront/fit.hpp"
#include "mfront/spectral.hpp"

namespace mfront {

namespace {

double interp_at(const Grid1D& g, const std::vector<double>& v, double x) {
    const std::vector<double>& xs = g.x;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    int i = static_cast<int>(it - xs.begin()) - 1;
    i = std::clamp(i, 0, g.n() - 2);
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return v[i] + t * (v[i + 1] - v[i]);
}

// Signed-log central difference of the speed at the equilibrium; the two
// samples have opposite signs, so the subtraction accumulates magnitude
// instead of cancelling.
double speed_slope_at_star(const ProblemSpec& spec, double xi_star, SpeedMode mode) {
    const double dxi = 1e-3 * spec.grid.ell;
    const SignedLog tp = interface_speed(spec, xi_star + dxi, mode);
    const SignedLog tm = interface_speed(spec, xi_star - dxi, mode);
    return ((tp - tm) / (2.0 * dxi)).value();
}

}  // namespace

SignedLog interface_speed(const ProblemSpec& spec, double xi, SpeedMode mode) {
    const ApproxSteadyState member = build_approx_member(spec, xi);
    std::vector<double> psi;
    if (mode == SpeedMode::fast && spec.flux.kind == FluxKind::conservation) {
        psi = adjoint_eigenfunction_limit(spec, xi);
    } else {
        psi = spectrum_of_L(spec, member, 1).psi[0];
    }
    const std::vector<double> dxi_u = family_derivative(spec, xi);
    const double pairing = inner_product(spec.grid, psi, dxi_u);
    if (std::abs(pairing) < 1e-14)
        throw std::domain_error(
            "interface_speed: adjoint eigenfunction is not transversal to the family "
            "derivative (normalization pairing below 1e-14)");
    const double psi_at_match = interp_at(spec.grid, psi, xi);
    return member.jump * (spec.epsilon * psi_at_match / pairing);
}

double equilibrium_abscissa(const ProblemSpec& spec) { return equilibrium_point(spec); }

SpeedMap build_speed_map(const ProblemSpec& spec, const std::vector<double>& xi_grid,
                         SpeedMode mode) {
    SpeedMap map;
    map.xi_grid = xi_grid;
    map.theta.reserve(xi_grid.size());
    for (double xi : xi_grid) map.theta.push_back(interface_speed(spec, xi, mode));
    map.xi_star = equilibrium_point(spec);
    map.theta_prime_at_star = speed_slope_at_star(spec, map.xi_star, mode);
    return map;
}

double decay_rate(const ProblemSpec& spec, SpeedMode mode) {
    const double xi_star = equilibrium_point(spec);
    const double beta = -speed_slope_at_star(spec, xi_star, mode);
    if (!(beta > 0.0)) {
        std::ostringstream os;
        os << "decay_rate: computed rate " << beta
           << " is not positive; the sign condition (xi - xi_star) * theta(xi) < 0 fails "
              "near the equilibrium";
        throw std::domain_error(os.str());
    }
    return beta;
}

namespace {

// Cumulative time table t(d) for the distance d = |xi - xi_star|, built by
// per-cell 5-point Gauss quadrature of 1/|theta| on a geometric mesh, plus a
// log-linear integrand model per cell so output times can be inverted to
// sub-cell accuracy without extra speed evaluations.
struct TimeTable {
    std::vector<double> d;      // cell boundaries, decreasing, size cells+1
    std::vector<double> t;      // cumulative time at the boundaries, t[0] = 0
    std::vector<double> a, b;   // per-cell model ln(1/|theta|) ~ a + b*d
    std::vector<double> scale;  // model rescale matching the Gauss cell total
};

constexpr double kGaussNode[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                  0.5384693101056831, 0.9061798459386640};
constexpr double kGaussWeight[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                    0.4786286704993665, 0.2369268850561891};

TimeTable tabulate_times(const ProblemSpec& spec, double xi_star, double dir, double d0,
                         double d_stop, SpeedMode mode, std::size_t cells) {
    TimeTable tab;
    tab.d.resize(cells + 1);
    const double rho = std::pow(d_stop / d0, 1.0 / static_cast<double>(cells));
    tab.d[0] = d0;
    for (std::size_t k = 1; k < cells; ++k) tab.d[k] = tab.d[k - 1] * rho;
    tab.d[cells] = d_stop;

    tab.t.assign(cells + 1, 0.0);
    tab.a.resize(cells);
    tab.b.resize(cells);
    tab.scale.resize(cells);
    std::vector<double> nodes(5), log_inv(5);
    for (std::size_t k = 0; k < cells; ++k) {
        const double da = tab.d[k], db = tab.d[k + 1];
        const double mid = 0.5 * (da + db), half = 0.5 * (da - db);
        double cell_time = 0.0;
        for (int q = 0; q < 5; ++q) {
            const double delta = mid + half * kGaussNode[q];
            const SignedLog th = interface_speed(spec, xi_star + dir * delta, mode);
            if (th.is_zero() || th.sign != (dir > 0.0 ? -1 : 1)) {
                std::ostringstream os;
                os << "integrate_interface: speed at xi = " << xi_star + dir * delta
                   << " does not point toward the equilibrium; sign hypothesis violated";
                throw std::domain_error(os.str());
            }
            if (-th.log_abs > 700.0)
                throw std::runtime_error(
                    "integrate_interface: traversal time exceeds the representable range "
                    "(speed underflows; reduce the horizon or increase epsilon)");
            nodes[q] = delta;
            log_inv[q] = -th.log_abs;
            cell_time += kGaussWeight[q] * half * std::exp(log_inv[q]);
        }
        const LinearFit model = linear_fit(nodes, log_inv);
        tab.a[k] = model.intercept;
        tab.b[k] = model.slope;
        // model cell total, for rescaling to the Gauss value
        double model_total;
        const double width = da - db;
        if (std::abs(model.slope) * width < 1e-9) {
            model_total = std::exp(model.intercept + model.slope * mid) * width;
        } else {
            model_total = (std::exp(model.intercept + model.slope * da) -
                           std::exp(model.intercept + model.slope * db)) /
                          model.slope;
        }
        tab.scale[k] = model_total > 0.0 ? cell_time / model_total : 1.0;
        tab.t[k + 1] = tab.t[k] + cell_time;
    }
    return tab;
}

// Distance at elapsed time tq, by closed-form inversion of the per-cell
// log-linear model (rescaled so the cell totals match the Gauss values).
double distance_at(const TimeTable& tab, double tq) {
    if (tq <= 0.0) return tab.d.front();
    if (tq >= tab.t.back()) return tab.d.back();
    const auto it = std::upper_bound(tab.t.begin(), tab.t.end(), tq);
    const std::size_t k = static_cast<std::size_t>(it - tab.t.begin()) - 1;
    const double da = tab.d[k], db = tab.d[k + 1];
    const double tau = tq - tab.t[k];
    const double cell_total = tab.t[k + 1] - tab.t[k];
    const double a = tab.a[k], b = tab.b[k], s = tab.scale[k];
    const double width = da - db;
    double delta;
    if (std::abs(b) * width < 1e-9 || a + b * da > 705.0 || s <= 0.0) {
        // flat (or overflow-guarded) integrand: linear inversion
        delta = da - width * (cell_total > 0.0 ? tau / cell_total : 0.0);
    } else {
        const double ea = std::exp(a + b * da);
        const double e = ea - tau * b / s;
        if (e <= 0.0) return db;
        delta = (std::log(e) - a) / b;
    }
    return std::clamp(delta, db, da);
}

std::vector<double> log_spaced_times(double t_hi, std::size_t count) {
    std::vector<double> out;
    out.push_back(0.0);
    if (!(t_hi > 0.0) || count < 2) return out;
    const double t_lo = t_hi * 1e-6;
    const double ratio = std::pow(t_hi / t_lo, 1.0 / static_cast<double>(count - 1));
    double t = t_lo;
    for (std::size_t i = 0; i < count; ++i, t *= ratio) out.push_back(std::min(t, t_hi));
    out.back() = t_hi;
    return out;
}

}  // namespace

InterfaceTrajectory integrate_interface(const ProblemSpec& spec, double xi0,
                                        const ReducedIntegration& opts) {
    const double ell = spec.grid.ell;
    const double xi_star = equilibrium_point(spec);
    const double d0 = std::abs(xi0 - xi_star);
    const double dir = xi0 >= xi_star ? 1.0 : -1.0;
    const double d_floor = 1e-6 * ell;

    InterfaceTrajectory traj;
    traj.provenance = TrajectoryProvenance::reduced;

    if (d0 <= d_floor) {
        // starting at (numerical) equilibrium: constant trajectory
        if (!opts.output_times.empty())
            traj.times = opts.output_times;
        else
            traj.times = log_spaced_times(opts.target_xi ? 0.0 : opts.t_end, opts.output_points);
        traj.xi.assign(traj.times.size(), xi0);
        return traj;
    }

    double d_stop = d_floor;
    if (opts.target_xi) {
        const double signed_target = (*opts.target_xi - xi_star) * dir;
        if (signed_target <= 0.0)
            throw std::domain_error(
                "integrate_interface: target lies at or beyond the equilibrium; the "
                "trajectory cannot cross it");
        if (signed_target >= d0)
            throw std::domain_error(
                "integrate_interface: target lies behind the start; the interface moves "
                "monotonically toward the equilibrium");
        d_stop = std::max(signed_target, d_floor);
    }

    const std::size_t cells = std::max<std::size_t>(opts.mesh_cells, 8);
    const TimeTable tab = tabulate_times(spec, xi_star, dir, d0, d_stop, opts.mode, cells);

    double t_hi = tab.t.back();
    if (!opts.target_xi && opts.t_end > 0.0) t_hi = std::min(t_hi, opts.t_end);
    if (!opts.output_times.empty())
        traj.times = opts.output_times;
    else
        traj.times = log_spaced_times(t_hi, opts.output_points);
    traj.xi.reserve(traj.times.size());
    for (double t : traj.times) traj.xi.push_back(xi_star + dir * distance_at(tab, t));

    // fitted exponential rate over the late tail (distance within 10% of the
    // initial one, excluding samples pinned at the stopping floor)
    std::vector<double> ts, lds;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double d = std::abs(traj.xi[i] - xi_star);
        if (d <= 0.1 * d0 && d > d_stop * (1.0 + 1e-9)) {
            ts.push_back(traj.times[i]);
            lds.push_back(std::log(d));
        }
    }
    if (ts.size() >= 3) traj.beta_fit = -linear_fit(ts, lds).slope;
    return traj;
}

double halving_time(const ProblemSpec& spec, double xi0, SpeedMode mode) {
    const double xi_star = equilibrium_point(spec);
    const double d0 = std::abs(xi0 - xi_star);
    if (d0 <= 1e-6 * spec.grid.ell)
        throw std::domain_error("halving_time: start coincides with the equilibrium");
    const double dir = xi0 >= xi_star ? 1.0 : -1.0;
    // the span is a single factor of two in distance; Gauss-5 on a few
    // geometric cells already integrates the near-log-linear 1/|theta|
    // far below the speed-evaluation accuracy
    const TimeTable tab = tabulate_times(spec, xi_star, dir, d0, 0.5 * d0, mode, 64);
    return tab.t.back();
}

}  // namespace mfront
