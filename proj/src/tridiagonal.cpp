#include "mfront/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace mfront {

std::vector<double> Tridiagonal::apply(const std::vector<double>& x) const {
    const std::size_t n = size();
    if (x.size() != n) throw std::invalid_argument("tridiagonal apply: size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += lower[i - 1] * x[i - 1];
        if (i + 1 < n) v += upper[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

std::vector<double> SymmetricTridiagonal::apply(const std::vector<double>& x) const {
    const std::size_t n = size();
    if (x.size() != n) throw std::invalid_argument("tridiagonal apply: size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += off[i - 1] * x[i - 1];
        if (i + 1 < n) v += off[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& A, const std::vector<double>& rhs) {
    const std::size_t n = A.size();
    if (rhs.size() != n) throw std::invalid_argument("tridiagonal solve: size mismatch");
    if (n == 0) return {};
    // LU with partial pivoting between adjacent rows; row swaps create a
    // second superdiagonal (du2).  Zero pivots are flushed to a tiny
    // value so nearly singular shifted systems (inverse iteration)
    // produce a large, normalizable solution instead of NaN.
    std::vector<double> d(A.diag), du(A.upper), dl(A.lower);
    std::vector<double> du2(n > 2 ? n - 2 : 0, 0.0);
    std::vector<double> x(rhs);
    double amax = 0.0;
    for (double v : d) amax = std::max(amax, std::abs(v));
    for (double v : du) amax = std::max(amax, std::abs(v));
    for (double v : dl) amax = std::max(amax, std::abs(v));
    const double pivot_floor =
        std::max(amax, std::numeric_limits<double>::min()) * std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            double piv = d[i];
            if (std::abs(piv) < pivot_floor) piv = std::copysign(pivot_floor, piv == 0.0 ? 1.0 : piv);
            const double m = dl[i] / piv;
            d[i] = piv;
            d[i + 1] -= m * du[i];
            x[i + 1] -= m * x[i];
            if (i + 2 < n) du2[i] = 0.0;
        } else {
            // rows i and i+1 swap before elimination
            const double m = d[i] / dl[i];
            d[i] = dl[i];
            const double t = d[i + 1];
            d[i + 1] = du[i] - m * t;
            du[i] = t;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -m * du[i + 1];
            }
            const double xb = x[i];
            x[i] = x[i + 1];
            x[i + 1] = xb - m * x[i + 1];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double v = x[k];
        if (k + 1 < n) v -= du[k] * x[k + 1];
        if (k + 2 < n) v -= du2[k] * x[k + 2];
        double piv = d[k];
        if (std::abs(piv) < pivot_floor) piv = std::copysign(pivot_floor, piv == 0.0 ? 1.0 : piv);
        x[k] = v / piv;
    }
    for (double v : x)
        if (!std::isfinite(v)) throw std::runtime_error("tridiagonal solve: singular matrix");
    return x;
}

BalancedForm balance_to_symmetric(const Tridiagonal& A) {
    const std::size_t n = A.size();
    BalancedForm out;
    out.sym.diag = A.diag;
    out.sym.off.resize(n > 0 ? n - 1 : 0);
    out.log_d.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double p = A.lower[i] * A.upper[i];
        if (!(p > 0.0))
            throw std::domain_error(
                "balance_to_symmetric: off-diagonal product not positive; "
                "matrix is not symmetrizable by diagonal scaling");
        out.sym.off[i] = std::sqrt(p);
        // D_{i+1} = D_i * sqrt(lower_i / upper_i)
        out.log_d[i + 1] =
            out.log_d[i] + 0.5 * (std::log(std::abs(A.lower[i])) - std::log(std::abs(A.upper[i])));
    }
    return out;
}

std::size_t eigenvalues_below(const SymmetricTridiagonal& S, double shift) {
    const std::size_t n = S.size();
    std::size_t count = 0;
    double q = 1.0;
    const double tiny = std::numeric_limits<double>::min();
    for (std::size_t i = 0; i < n; ++i) {
        const double offsq = (i > 0) ? S.off[i - 1] * S.off[i - 1] : 0.0;
        q = S.diag[i] - shift - (i > 0 ? offsq / q : 0.0);
        if (q == 0.0) q = -tiny;  // flush exact zero pivots; counts shift as "below"
        if (q < 0.0) ++count;
    }
    return count;
}

namespace {

// Gershgorin bounds for a symmetric tridiagonal.
std::pair<double, double> gershgorin(const SymmetricTridiagonal& S) {
    const std::size_t n = S.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(S.off[i - 1]);
        if (i + 1 < n) r += std::abs(S.off[i]);
        lo = std::min(lo, S.diag[i] - r);
        hi = std::max(hi, S.diag[i] + r);
    }
    if (n == 0) return {0.0, 0.0};
    return {lo, hi};
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

std::vector<EigenPair> largest_eigenpairs(const SymmetricTridiagonal& S, std::size_t count,
                                          const EigenOptions& opts) {
    const std::size_t n = S.size();
    count = std::min(count, n);
    std::vector<EigenPair> out;
    if (count == 0) return out;

    auto [glo, ghi] = gershgorin(S);
    const double scale = std::max({std::abs(glo), std::abs(ghi), 1.0});
    const double width_floor = 8.0 * std::numeric_limits<double>::epsilon() * scale;

    // Bisection for the k-th largest eigenvalue: it is eigenvalue number
    // n-1-k in ascending order, i.e. the unique x with
    // eigenvalues_below(x) <= n-1-k < eigenvalues_below(x+).
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t idx = n - 1 - k;  // ascending index
        double lo = glo, hi = ghi + width_floor;
        // invariant: count(lo) <= idx < count(hi)
        for (int it = 0; it < 220; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (eigenvalues_below(S, mid) <= idx)
                lo = mid;
            else
                hi = mid;
            const double tol =
                std::max(width_floor, opts.relative_tolerance * std::max(std::abs(lo), std::abs(hi)));
            if (hi - lo <= tol) break;
        }
        values[k] = 0.5 * (lo + hi);
    }

    // Inverse iteration with re-orthogonalization against previously
    // accepted vectors (handles clustered eigenvalues).
    std::mt19937_64 rng(0x5eedu);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Tridiagonal shifted;
    shifted.diag.resize(n);
    shifted.lower.assign(S.off.begin(), S.off.end());
    shifted.upper.assign(S.off.begin(), S.off.end());
    for (std::size_t k = 0; k < count; ++k) {
        // nudge the shift off the eigenvalue so the solve stays finite
        double shift = values[k];
        const double nudge = std::max(width_floor, 1e-14 * scale);
        shift += nudge;
        for (std::size_t i = 0; i < n; ++i) shifted.diag[i] = S.diag[i] - shift;

        std::vector<double> v(n);
        for (double& vi : v) vi = unif(rng);
        auto orthogonalize = [&](std::vector<double>& w) {
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t j = 0; j < k; ++j) {
                    const double c = dot(w, out[j].vector);
                    for (std::size_t i = 0; i < n; ++i) w[i] -= c * out[j].vector[i];
                }
        };
        orthogonalize(v);
        double nv = norm2(v);
        if (nv == 0.0) {
            v.assign(n, 0.0);
            v[k % n] = 1.0;
            nv = 1.0;
        }
        for (double& vi : v) vi /= nv;

        bool converged = false;
        for (std::size_t it = 0; it < opts.max_inverse_iterations; ++it) {
            std::vector<double> w = solve_tridiagonal(shifted, v);
            orthogonalize(w);
            const double nw = norm2(w);
            if (!(nw > 0.0) || !std::isfinite(nw))
                throw std::runtime_error("inverse iteration: breakdown");
            for (double& wi : w) wi /= nw;
            // convergence: alignment with previous iterate
            double align = std::abs(dot(w, v));
            v = std::move(w);
            if (1.0 - align < 1e-13) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw std::runtime_error("inverse iteration: no convergence within iteration budget");
        // sign convention: first component distinguishable from zero is positive
        double vmax = 0.0;
        for (double vi : v) vmax = std::max(vmax, std::abs(vi));
        for (double vi : v) {
            if (std::abs(vi) > 1e-12 * vmax) {
                if (vi < 0.0)
                    for (double& vj : v) vj = -vj;
                break;
            }
        }
        // Rayleigh-quotient refinement: for the converged unit vector this
        // is accurate to rounding, tighter than the bisection bracket.
        const double rayleigh = dot(v, S.apply(v));
        const double refined =
            (std::abs(rayleigh - values[k]) <= 1e-6 * scale) ? rayleigh : values[k];
        out.push_back(EigenPair{refined, std::move(v)});
    }
    return out;
}

}  // namespace mfront
