#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mfront/csv.hpp"
#include "mfront/fit.hpp"
#include "mfront/function_catalog.hpp"
#include "mfront/grid.hpp"
#include "mfront/problem.hpp"
#include "mfront/quadrature.hpp"
#include "mfront/signed_log.hpp"
#include "mfront/tridiagonal.hpp"

using namespace mfront;

namespace {

ProblemSpec burgers_spec(double eps, int n, double ell = 1.0) {
    DiffusionCoefficient diff{make_constant(1.0), 1.0, 1.0};
    return ProblemSpec::make(eps, Grid1D::make_uniform(ell, n), diff, FluxSpec::burgers());
}

ProblemSpec exp_coeff_spec(double eps, int n) {
    SpatialFunction a = make_exponential(1.0, 1.0);
    const double lo = std::exp(-1.0), hi = std::exp(1.0);
    DiffusionCoefficient diff{a, lo, hi};
    return ProblemSpec::make(eps, Grid1D::make_uniform(1.0, n), diff, FluxSpec::burgers());
}

}  // namespace

TEST_CASE("polynomial evaluation, derivative, cancellation-free increment") {
    const Polynomial p({1.0, 2.0, 3.0});  // 1 + 2u + 3u^2
    CHECK(p(0.0) == doctest::Approx(1.0));
    CHECK(p(2.0) == doctest::Approx(1.0 + 4.0 + 12.0));
    const Polynomial dp = p.derivative();
    CHECK(dp(2.0) == doctest::Approx(2.0 + 12.0));

    // increment_from must not lose the tiny step to cancellation
    const Polynomial f({0.0, 0.0, 0.5});  // u^2/2
    const double t = 1e-13;
    const double inc = f.increment_from(1.0, t);
    const double exact = t + 0.5 * t * t;
    CHECK(std::abs(inc - exact) <= 1e-12 * std::abs(exact));

    const Polynomial shifted = f.shifted_by_constant(-0.5);
    CHECK(shifted(1.0) == doctest::Approx(0.0));
}

TEST_CASE("signed log arithmetic") {
    const SignedLog a = SignedLog::from_value(-3.0);
    const SignedLog b = SignedLog::from_value(2.0);
    CHECK(a.sign == -1);
    CHECK((a * b).value() == doctest::Approx(-6.0));
    CHECK((a / b).value() == doctest::Approx(-1.5));
    const SignedLog z = SignedLog::from_value(0.0);
    CHECK(z.is_zero());
    CHECK(z.value() == 0.0);
    // addition goes through log-sum-exp and must survive huge magnitudes
    SignedLog big;
    big.sign = 1;
    big.log_abs = 500.0;
    SignedLog small;
    small.sign = -1;
    small.log_abs = 499.0;
    const SignedLog sum = big + small;
    CHECK(sum.sign == 1);
    CHECK(sum.log_abs == doctest::Approx(500.0 + std::log(1.0 - std::exp(-1.0))));
}

TEST_CASE("spatial function catalog with derivatives") {
    const SpatialFunction c = make_constant(2.5);
    CHECK(c(0.3) == 2.5);
    CHECK(c.deriv(0.3) == 0.0);

    const SpatialFunction e = make_exponential(2.0, -1.5);
    CHECK(e(0.4) == doctest::Approx(2.0 * std::exp(-0.6)));
    CHECK(e.deriv(0.4) == doctest::Approx(-3.0 * std::exp(-0.6)));

    const SpatialFunction p = make_polynomial({1.0, 0.0, 1.0});  // 1 + x^2
    CHECK(p(2.0) == doctest::Approx(5.0));
    CHECK(p.deriv(2.0) == doctest::Approx(4.0));

    const SpatialFunction r = make_rational({1.0}, {1.0, 0.0, 1.0});  // 1/(1+x^2)
    CHECK(r(1.0) == doctest::Approx(0.5));
    CHECK(r.deriv(1.0) == doctest::Approx(-2.0 / 4.0));

    CHECK_THROWS_AS(make_spatial_function("mystery", {}), std::invalid_argument);
    CHECK_THROWS_AS(make_spatial_function("constant", {}), std::invalid_argument);
}

TEST_CASE("grids: factories, trapezoid pairing, norms") {
    const Grid1D g = Grid1D::make_uniform(1.0, 1001);
    CHECK(g.n() == 1001);
    CHECK(g.x.front() == doctest::Approx(-1.0));
    CHECK(g.x.back() == doctest::Approx(1.0));
    CHECK(g.h == doctest::Approx(2.0 / 1000.0));
    CHECK(g.min_cell_width() == doctest::Approx(g.h));

    std::vector<double> ones(g.x.size(), 1.0);
    CHECK(inner_product(g, ones, ones) == doctest::Approx(2.0));
    CHECK(l2_norm(g, ones) == doctest::Approx(std::sqrt(2.0)));

    // int_{-1}^{1} sin^2(pi x) dx = 1
    std::vector<double> s(g.x.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sin(M_PI * g.x[i]);
    CHECK(inner_product(g, s, s) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(linf_norm(s) <= 1.0 + 1e-12);

    const Grid1D t = Grid1D::make_tanh_stretched(1.0, 201, 0.25, 3.0);
    CHECK(t.n() == 201);
    CHECK(t.x.front() == doctest::Approx(-1.0));
    CHECK(t.x.back() == doctest::Approx(1.0));
    for (int i = 0; i + 1 < t.n(); ++i) CHECK(t.x[i] < t.x[i + 1]);
    // clustered near the requested center
    CHECK(t.min_cell_width_near(0.25, 0.05) < t.min_cell_width_near(-0.9, 0.05));
    CHECK_FALSE(t.uniform);
}

TEST_CASE("adaptive quadrature and the stationary level integral") {
    const double s = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(std::abs(s - 2.0) <= 1e-10);

    // Burgers: Phi(k) = int_{-1}^{1} ds/(k - s^2/2) = (4/kap) atanh(1/kap),
    // kap = sqrt(2k) -- closed form with elementary functions
    const Polynomial f({0.0, 0.0, 0.5});
    const Polynomial fp = f.derivative();
    const double k = 1.0, kap = std::sqrt(2.0 * k);
    const double oracle = (4.0 / kap) * std::atanh(1.0 / kap);
    const double nan = std::nan("");
    const double phi = level_integral(f, fp, k, -1.0, 1.0, 1e-13, nan, nan);
    CHECK(std::abs(phi - oracle) <= 1e-10 * oracle);
}

TEST_CASE("branch constant solve against an independent root") {
    // Solve (4/kap) atanh(1/kap) = target by bisection on kap, independently
    // of the library's log-delta machinery, then compare.
    const double target = 20.0;
    double lo = 1.0 + 1e-14, hi = 4.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double val = (4.0 / mid) * std::atanh(1.0 / mid);
        (val > target ? lo : hi) = mid;
    }
    const double kap_oracle = 0.5 * (lo + hi);

    const Polynomial f({0.0, 0.0, 0.5});
    const BranchConstant bc = solve_level_constant(f, f.derivative(), -1.0, 1.0, target);
    const double kap_code = std::sqrt(2.0 * bc.k);
    CHECK(std::abs(kap_code - kap_oracle) <= 1e-9 * kap_oracle);
    CHECK(bc.base_level == doctest::Approx(0.5));
    // delta tracked in log form must agree with the double-precision k
    CHECK(bc.delta.value() == doctest::Approx(bc.k - 0.5).epsilon(1e-9));
    CHECK(bc.delta.sign == 1);
}

TEST_CASE("diffusion-weighted coordinate b(x)") {
    const ProblemSpec flat = burgers_spec(0.1, 1001);
    const BCoordinate b1(flat);
    CHECK(b1.total() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b1.value(0.25) == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(b1.inverse(1.25) == doctest::Approx(0.25).epsilon(1e-10));

    // a(x) = e^x: b(x) = e - e^{-x}, b(ell) = e - 1/e
    const ProblemSpec grown = exp_coeff_spec(0.1, 2001);
    const BCoordinate b2(grown);
    const double total_oracle = 2.350402387287603;  // e - 1/e
    CHECK(std::abs(b2.total() - total_oracle) <= 1e-10);
    CHECK(std::abs(b2.value(0.5) - (std::exp(1.0) - std::exp(-0.5))) <= 1e-10);
    CHECK(b2.inverse(b2.value(0.5)) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_THROWS_AS(b2.inverse(-0.1), std::domain_error);
    CHECK_THROWS_AS(b_integral(grown, 1.5), std::domain_error);
}

TEST_CASE("equilibrium abscissa from the half-mass relation") {
    const ProblemSpec flat = burgers_spec(0.1, 1001);
    CHECK(std::abs(equilibrium_point(flat)) <= 1e-12);

    // a = e^x: e - e^{-x*} = (e - 1/e)/2  =>  x* = -log(cosh(1))
    const ProblemSpec grown = exp_coeff_spec(0.1, 2001);
    const double oracle = -std::log(std::cosh(1.0));  // -0.4337808304830271
    CHECK(std::abs(equilibrium_point(grown) - oracle) <= 1e-8);
}

TEST_CASE("flux specifications") {
    const FluxSpec b = FluxSpec::burgers();
    CHECK(b.u_star == doctest::Approx(0.0));
    CHECK(b.f_at(b.u_star) == doctest::Approx(0.0));
    CHECK(b.f_at(1.0) == doctest::Approx(0.5));
    CHECK(b.fp_at(0.7) == doctest::Approx(0.7));

    // a shifted convex flux gets renormalized so f(u_star) = 0
    const FluxSpec sh = FluxSpec::conservation(Polynomial({5.0, 0.0, 0.5}), 1.0, -1.0);
    CHECK(sh.normalization_shift == doctest::Approx(-5.0));
    CHECK(sh.f_at(sh.u_star) == doctest::Approx(0.0));

    const FluxSpec r = FluxSpec::reaction(Polynomial({0.0, 1.0, 0.0, -1.0}), 1.0, -1.0);
    CHECK(r.u_star == doctest::Approx(0.0));
    CHECK(r.kind == FluxKind::reaction);

    CHECK_THROWS_AS(FluxSpec::burgers(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FluxSpec::reaction(Polynomial({1.0}), 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("structural hypotheses are verified, not assumed") {
    const ProblemSpec good = burgers_spec(0.1, 1001);
    const HypothesesReport rep = validate_hypotheses(good);
    CHECK(rep.all_pass());
    CHECK_NOTHROW(require_hypotheses(good));

    // a(x) = 0.1 - x^2 loses ellipticity inside the domain
    SpatialFunction bad_a = make_polynomial({0.1, 0.0, -1.0});
    DiffusionCoefficient diff{bad_a, -0.9, 0.1};
    const ProblemSpec bad =
        ProblemSpec::make(0.1, Grid1D::make_uniform(1.0, 401), diff, FluxSpec::burgers());
    CHECK_FALSE(validate_hypotheses(bad).all_pass());
    CHECK_THROWS_AS(require_hypotheses(bad), std::domain_error);

    CHECK_THROWS_AS(ProblemSpec::make(-0.1, Grid1D::make_uniform(1.0, 101),
                                      DiffusionCoefficient{make_constant(1.0), 1.0, 1.0},
                                      FluxSpec::burgers()),
                    std::invalid_argument);
}

TEST_CASE("tridiagonal solver against a hand solution") {
    Tridiagonal A;
    A.diag = {2.0, 3.0, 4.0};
    A.lower = {1.0, 1.0};
    A.upper = {-1.0, 2.0};
    const std::vector<double> x{1.0, -2.0, 3.0};
    const std::vector<double> rhs = A.apply(x);
    CHECK(rhs[0] == doctest::Approx(2.0 * 1.0 - 1.0 * -2.0));
    const std::vector<double> sol = solve_tridiagonal(A, rhs);
    for (int i = 0; i < 3; ++i) CHECK(sol[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("symmetric eigenpairs against the discrete Laplacian formula") {
    const int n = 200;
    SymmetricTridiagonal S;
    S.diag.assign(n, 2.0);
    S.off.assign(n - 1, -1.0);
    // eigenvalues 2 - 2 cos(k pi / (n+1)), k = 1..n
    auto exact = [&](int k) { return 2.0 - 2.0 * std::cos(k * M_PI / (n + 1.0)); };

    CHECK(eigenvalues_below(S, 0.0) == 0);
    CHECK(eigenvalues_below(S, 4.5) == static_cast<std::size_t>(n));
    CHECK(eigenvalues_below(S, exact(3) + 1e-9) == 3);

    const std::vector<EigenPair> top = largest_eigenpairs(S, 3);
    REQUIRE(top.size() == 3);
    for (int j = 0; j < 3; ++j) {
        const double lam = exact(n - j);
        CHECK(std::abs(top[j].value - lam) <= 1e-12 * lam);
        // unit vector, small residual
        double nrm2 = 0.0;
        for (double v : top[j].vector) nrm2 += v * v;
        CHECK(std::sqrt(nrm2) == doctest::Approx(1.0).epsilon(1e-12));
        const std::vector<double> Sv = S.apply(top[j].vector);
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = Sv[i] - top[j].value * top[j].vector[i];
            res += d * d;
        }
        CHECK(std::sqrt(res) <= 1e-10);
    }
}

TEST_CASE("diagonal balancing of a symmetrizable tridiagonal") {
    const int n = 5;
    Tridiagonal A;
    A.diag.assign(n, 1.0);
    A.lower.assign(n - 1, 2.0);
    A.upper.assign(n - 1, 0.5);
    const BalancedForm bf = balance_to_symmetric(A);
    for (int i = 0; i < n - 1; ++i) {
        CHECK(bf.sym.off[i] == doctest::Approx(1.0));  // sqrt(2 * 0.5)
        CHECK(bf.log_d[i + 1] - bf.log_d[i] == doctest::Approx(0.5 * std::log(2.0 / 0.5)));
    }
    for (int i = 0; i < n; ++i) CHECK(bf.sym.diag[i] == doctest::Approx(1.0));

    A.upper[1] = -0.5;  // sign change breaks similarity to a symmetric matrix
    CHECK_THROWS_AS(balance_to_symmetric(A), std::domain_error);
}

TEST_CASE("linear fit statistics") {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(3.0 - 2.0 * x);
    const LinearFit fit = linear_fit(xs, ys);
    CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.slope_stderr <= 1e-12);

    CHECK_THROWS_AS(linear_fit({1.0}, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(linear_fit({1.0, 2.0}, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(linear_fit({1.0, 1.0}, {2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("csv writer format contract") {
    const std::string path = "test_csv_contract.csv";
    {
        CsvWriter csv(path, {"a", "b"});
        csv.row({1.0 / 3.0, -2.0});
        csv.row(std::vector<double>{0.1, 1e-300});
    }
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string body = ss.str();
    CHECK(body.find("a,b\n") == 0);
    // 17 significant digits: 1/3 and 0.1 round-trip exactly
    CHECK(body.find("0.33333333333333331") != std::string::npos);
    CHECK(body.find("0.10000000000000001") != std::string::npos);
    CHECK(body.find('\r') == std::string::npos);
    std::remove(path.c_str());

    CHECK_THROWS_AS(CsvWriter("/nonexistent_dir_zz/out.csv", {"a"}), std::runtime_error);
}
