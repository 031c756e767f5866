#include "mfront/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mfront {

namespace {

double simpson_slice(double fa, double fm, double fb, double width) {
    return width / 6.0 * (fa + 4.0 * fm + fb);
}

struct SimpsonWorker {
    const std::function<double(double)>& f;
    int max_depth;

    double run(double a, double m, double b, double fa, double fm, double fb, double whole,
               double tol, int depth) const {
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = simpson_slice(fa, flm, fm, m - a);
        const double right = simpson_slice(fm, frm, fb, b - m);
        const double delta = left + right - whole;
        if (std::fabs(delta) <= 15.0 * tol || depth >= max_depth) {
            if (depth >= max_depth && std::fabs(delta) > 15.0 * tol)
                throw std::runtime_error("adaptive quadrature: recursion depth exceeded");
            return left + right + delta / 15.0;
        }
        return run(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               run(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

double log_expm1(double t) {
    // log(e^t - 1) without overflow for large t.
    if (t > 36.0) return t;
    return std::log(std::expm1(t));
}

double logsumexp(double x, double y) {
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

// Description of one endpoint of the level integral.
struct EndpointLayer {
    double pos = 0.0;       // abscissa of the endpoint
    double dir = 1.0;       // +1 if the interval lies to the right, -1 to the left
    double g = 0.0;         // inward slope of (k - f); > 0 means possible layer
    double log_delta = 0.0; // log(k - f(pos))
    double w = 0.0;         // width of the stretched segment (0 = none)
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson_slice(fa, fm, fb, b - a);
    SimpsonWorker worker{f, max_depth};
    return worker.run(a, m, b, fa, fm, fb, whole, tol, 0);
}

double level_integral(const Polynomial& f, const Polynomial& f_prime, double k, double ua,
                      double ub, double rel_tol, double log_delta_a, double log_delta_b) {
    if (!(ub > ua)) throw std::invalid_argument("level_integral: require ua < ub");
    const double span = ub - ua;
    const Polynomial f_second = f_prime.derivative();

    auto make_end = [&](double pos, double dir, double given_log_delta) {
        EndpointLayer e;
        e.pos = pos;
        e.dir = dir;
        e.g = -dir * f_prime(pos);  // slope of (k - f) going inward
        if (std::isnan(given_log_delta)) {
            const double delta = k - f(pos);
            if (!(delta > 0.0))
                throw std::domain_error("level_integral: level k does not exceed f at endpoint");
            e.log_delta = std::log(delta);
        } else {
            e.log_delta = given_log_delta;
        }
        e.w = 0.0;
        if (e.g > 0.0) {
            // Candidate stretched width: stay inside the first third of the
            // interval and inside the region where the inward decay of f is
            // still dominated by its endpoint slope (so the layer map stays
            // well conditioned).
            double w = span / 3.0;
            double m2 = 0.0;
            for (double frac : {0.0, 0.5, 1.0})
                m2 = std::max(m2, std::fabs(f_second(pos + dir * w * frac)));
            if (m2 > 0.0) w = std::min(w, 0.5 * e.g / m2);
            // Use the stretched map only when the layer is much thinner than
            // the segment; otherwise plain refinement resolves it.
            const double log_layer_width = e.log_delta - std::log(e.g);
            if (log_layer_width < std::log(1e-3 * w)) e.w = w;
        }
        return e;
    };

    EndpointLayer ea = make_end(ua, +1.0, log_delta_a);
    EndpointLayer eb = make_end(ub, -1.0, log_delta_b);

    // Stretched-layer integral at one endpoint: substitute
    //   offset o = (e^tau - 1) * delta / g,  tau in [0, T],
    // under which ds/(k - f) becomes  e^{log_delta + tau} / (g (delta + D(o)))
    // with D(o) = f(pos) - f(pos + dir*o) >= 0 evaluated through the
    // cancellation-free polynomial increment.
    auto layer_integral = [&](const EndpointLayer& e, double tol_abs) {
        const double log_g = std::log(e.g);
        const double T = std::log1p(std::exp(std::log(e.g * e.w) - e.log_delta));
        const double delta = std::exp(e.log_delta);  // >= ~1e-300 by solver clamp
        const std::vector<double> rec = f.recentered(e.pos);
        auto h = [&](double tau) {
            const double o = std::exp(log_expm1(tau) + e.log_delta - log_g);
            const double t = e.dir * o;
            double inc = 0.0;  // f(pos + t) - f(pos), cancellation-free
            for (std::size_t j = rec.size(); j-- > 1;) inc = inc * t + rec[j];
            inc *= t;
            const double den = delta + std::max(-inc, 0.0);
            return std::exp(e.log_delta + tau - std::log(den)) / e.g;
        };
        return adaptive_simpson(h, 0.0, T, tol_abs, 80);
    };

    auto direct = [&](double s) {
        const double den = k - f(s);
        if (!(den > 0.0))
            throw std::domain_error("level_integral: level k does not exceed the flux range");
        return 1.0 / den;
    };

    // Rough magnitude estimate to convert the relative tolerance into
    // absolute shares for the segments.
    double rough = 0.0;
    if (ea.w > 0.0)
        rough += std::log1p(std::exp(std::log(ea.g * ea.w) - ea.log_delta)) / ea.g;
    if (eb.w > 0.0)
        rough += std::log1p(std::exp(std::log(eb.g * eb.w) - eb.log_delta)) / eb.g;
    {
        const double lo = ua + ea.w, hi = ub - eb.w;
        rough += simpson_slice(direct(lo), direct(0.5 * (lo + hi)), direct(hi), hi - lo);
    }
    const double tol_abs = rel_tol * std::max(rough, 1e-300) / 3.0;

    double total = 0.0;
    if (ea.w > 0.0) total += layer_integral(ea, tol_abs);
    if (eb.w > 0.0) total += layer_integral(eb, tol_abs);
    total += adaptive_simpson(direct, ua + ea.w, ub - eb.w, tol_abs, 80);
    return total;
}

BranchConstant solve_level_constant(const Polynomial& f, const Polynomial& f_prime, double ua,
                                    double ub, double target, double rel_tol) {
    if (!(ub > ua)) throw std::invalid_argument("solve_level_constant: require ua < ub");
    if (!(target > 0.0))
        throw std::invalid_argument("solve_level_constant: target length must be positive");

    const double fa = f(ua), fb = f(ub);
    const double base = std::max(fa, fb);
    const double gap_a = base - fa, gap_b = base - fb;
    const double span = ub - ua;

    // Residual of the implicit relation as a function of w = log(k - base).
    auto phi = [&](double w) {
        const double k = base + std::exp(w);
        const double lda = gap_a == 0.0 ? w : logsumexp(w, std::log(gap_a));
        const double ldb = gap_b == 0.0 ? w : logsumexp(w, std::log(gap_b));
        return level_integral(f, f_prime, k, ua, ub, std::max(rel_tol * 0.05, 5e-15), lda, ldb);
    };

    double w_hi = std::max(2.0, std::log(span / target) + 2.0);
    double r_hi = phi(w_hi) - target;
    for (int guard = 0; r_hi >= 0.0; ++guard) {
        w_hi += 2.0;
        r_hi = phi(w_hi) - target;
        if (guard > 400)
            throw std::runtime_error("solve_level_constant: failed to bracket from above");
    }
    double w_lo = w_hi - 4.0;
    double r_lo = phi(w_lo) - target;
    constexpr double kMinLogDelta = -640.0;  // keep exp(log_delta) representable
    while (r_lo <= 0.0) {
        w_lo -= 30.0;
        if (w_lo < kMinLogDelta) {
            w_lo = kMinLogDelta;
            r_lo = phi(w_lo) - target;
            if (r_lo <= 0.0)
                throw std::runtime_error(
                    "solve_level_constant: branch excess below representable range (epsilon too "
                    "small for this geometry)");
            break;
        }
        r_lo = phi(w_lo) - target;
    }

    // Illinois-damped regula falsi on the decreasing, nearly affine map
    // w -> phi(w): the secant step is exact for affine maps, and the
    // damping keeps the bracket shrinking when one side stagnates.
    const double tol = rel_tol * target;
    double w_mid = w_lo;
    double r = r_lo;
    int held_side = 0;
    for (int it = 0; it < 300; ++it) {
        const double denom = r_hi - r_lo;
        w_mid = denom != 0.0 ? (w_lo * r_hi - w_hi * r_lo) / denom : 0.5 * (w_lo + w_hi);
        if (!(w_mid > w_lo && w_mid < w_hi)) w_mid = 0.5 * (w_lo + w_hi);
        r = phi(w_mid) - target;
        if (std::fabs(r) <= tol) {
            BranchConstant out;
            out.base_level = base;
            out.delta = SignedLog(1, w_mid);
            out.k = base + std::exp(w_mid);
            return out;
        }
        // phi decreases in w
        if (r > 0.0) {
            w_lo = w_mid;
            r_lo = r;
            if (held_side == -1) r_hi *= 0.5;
            held_side = -1;
        } else {
            w_hi = w_mid;
            r_hi = r;
            if (held_side == +1) r_lo *= 0.5;
            held_side = +1;
        }
        if (w_hi - w_lo < 1e-15 * std::max(1.0, std::fabs(w_mid))) break;
    }
    if (std::fabs(r) <= 100.0 * tol) {
        BranchConstant out;
        out.base_level = base;
        out.delta = SignedLog(1, w_mid);
        out.k = base + std::exp(w_mid);
        return out;
    }
    std::ostringstream os;
    os << "solve_level_constant: bisection stalled, residual " << r << " vs tolerance " << tol;
    throw std::runtime_error(os.str());
}

}  // namespace mfront
