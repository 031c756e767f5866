#include "mfront/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mfront/csv.hpp"
#include "mfront/fit.hpp"
#include "mfront/pde.hpp"
#include "mfront/reduced.hpp"
#include "mfront/spectral.hpp"
#include "mfront/steady.hpp"

namespace mfront {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("MFRONT_LOG");
        if (!env) return LogLevel::info;
        const std::string v(env);
        if (v == "quiet" || v == "0") return LogLevel::quiet;
        if (v == "debug" || v == "2") return LogLevel::debug;
        return LogLevel::info;
    }();
    return level;
}

void log_line(LogLevel at, const std::string& msg) {
    static std::mutex mu;
    if (static_cast<int>(at) > static_cast<int>(log_level())) return;
    std::lock_guard<std::mutex> lock(mu);
    // per-point summaries on stdout; debug detail on stderr
    (at == LogLevel::debug ? std::cerr : std::cout) << "[mfront] " << msg << std::endl;
}

namespace {

double elapsed_s(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string eps_tag(double e) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", e);
    return buf;
}

// Collects the files a run creates; unless commit() is reached, every file
// is renamed with a "_partial" suffix when the set unwinds.
class ArtifactSet {
  public:
    ArtifactSet() = default;
    ArtifactSet(const ArtifactSet&) = delete;
    ArtifactSet& operator=(const ArtifactSet&) = delete;

    std::string track(const fs::path& p) {
        std::lock_guard<std::mutex> lock(mu_);
        paths_.push_back(p);
        return p.string();
    }

    void commit() { committed_ = true; }

    ~ArtifactSet() {
        if (committed_) return;
        for (const fs::path& p : paths_) {
            std::error_code ec;
            if (!fs::exists(p, ec)) continue;
            const fs::path renamed =
                p.parent_path() / (p.stem().string() + "_partial" + p.extension().string());
            fs::rename(p, renamed, ec);
        }
    }

  private:
    std::mutex mu_;
    std::vector<fs::path> paths_;
    bool committed_ = false;
};

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

json config_echo(const ExperimentConfig& cfg) { return json::parse(cfg.to_json_text()); }

fs::path prepare_dir(const std::string& dir) {
    const fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
    fs::create_directories(p);
    return p;
}

// Index-sharded worker pool; tasks must only write to their own slots.
// Exceptions are collected and the first one is rethrown after the join.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    if (count == 0) return;
    int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

double log10_signed(const SignedLog& s) {
    return s.log_abs / std::log(10.0);
}

// ------------------------------------------------------------------ runners

void run_steady(const ExperimentConfig& cfg, const fs::path& dir, ArtifactSet& artifacts) {
    const bool multi = cfg.problem.epsilons.size() > 1;
    for (double eps : cfg.problem.epsilons) {
        const auto t0 = Clock::now();
        const ProblemSpec spec = cfg.make_problem(eps);
        const ExactSteadyState steady = build_exact_steady(spec);
        const std::string tag = multi ? "_eps" + eps_tag(eps) : "";
        {
            CsvWriter csv(artifacts.track(dir / ("steady_profile" + tag + ".csv")), {"x", "u"});
            for (int i = 0; i < spec.grid.n(); ++i) csv.row({spec.grid.x[i], steady.profile[i]});
        }
        json meta;
        meta["epsilon"] = eps;
        meta["kappa"] = steady.kappa;
        meta["kappa_excess_log"] = steady.kappa_excess.log_abs;
        meta["x_star"] = steady.x_star;
        meta["boundary_residual"] = steady.boundary_residual;
        meta["config"] = config_echo(cfg);
        meta["wall_seconds"] = elapsed_s(t0);
        write_json_file(artifacts.track(dir / ("steady_metadata" + tag + ".json")), meta);
        std::ostringstream os;
        os << "steady eps=" << eps << " kappa=" << steady.kappa << " x_star=" << steady.x_star
           << " (" << elapsed_s(t0) << " s)";
        log_line(LogLevel::info, os.str());
    }
}

struct SpectrumRow {
    double epsilon = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double gap = 0.0;
};

SpectrumRow run_spectrum_point(const ExperimentConfig& cfg, double eps, const fs::path& dir,
                               ArtifactSet& artifacts, const std::string& tag) {
    const auto t0 = Clock::now();
    const ProblemSpec spec = cfg.make_problem(eps);
    const ApproxSteadyState member = build_approx_member(spec, cfg.experiment.xi);
    const SpectrumResult result =
        spectrum_of_L(spec, member, static_cast<std::size_t>(cfg.experiment.modes));
    {
        CsvWriter csv(artifacts.track(dir / ("spectrum" + tag + ".csv")),
                      {"k", "lambda", "residual"});
        for (std::size_t k = 0; k < result.eigenvalues.size(); ++k)
            csv.row({static_cast<double>(k + 1), result.eigenvalues[k], result.residuals[k]});
    }
    {
        std::vector<std::string> header{"x"};
        for (std::size_t k = 1; k <= result.phi.size(); ++k)
            header.push_back("phi" + std::to_string(k));
        for (std::size_t k = 1; k <= result.psi.size(); ++k)
            header.push_back("psi" + std::to_string(k));
        CsvWriter csv(artifacts.track(dir / ("spectrum_modes" + tag + ".csv")), header);
        std::vector<double> row;
        for (int i = 0; i < spec.grid.n(); ++i) {
            row.clear();
            row.push_back(spec.grid.x[i]);
            for (const auto& phi : result.phi) row.push_back(phi[i]);
            for (const auto& psi : result.psi) row.push_back(psi[i]);
            csv.row(row);
        }
    }
    json meta;
    meta["epsilon"] = eps;
    meta["xi"] = cfg.experiment.xi;
    meta["eigenvalues"] = result.eigenvalues;
    meta["residuals"] = result.residuals;
    meta["gap"] = result.gap;
    meta["config"] = config_echo(cfg);
    meta["wall_seconds"] = elapsed_s(t0);
    write_json_file(artifacts.track(dir / ("spectrum_metadata" + tag + ".json")), meta);

    SpectrumRow row;
    row.epsilon = eps;
    row.lambda1 = result.eigenvalues.empty() ? 0.0 : result.eigenvalues[0];
    row.lambda2 = result.eigenvalues.size() > 1 ? result.eigenvalues[1] : 0.0;
    row.gap = result.gap;
    std::ostringstream os;
    os << "spectrum eps=" << eps << " xi=" << cfg.experiment.xi << " lambda1=" << row.lambda1
       << " lambda2=" << row.lambda2 << " (" << elapsed_s(t0) << " s)";
    log_line(LogLevel::info, os.str());
    return row;
}

void run_spectrum(const ExperimentConfig& cfg, const fs::path& dir, ArtifactSet& artifacts) {
    const bool multi = cfg.problem.epsilons.size() > 1;
    for (double eps : cfg.problem.epsilons)
        run_spectrum_point(cfg, eps, dir, artifacts, multi ? "_eps" + eps_tag(eps) : "");
}

struct SpeedmapRow {
    double epsilon = 0.0;
    double xi_star = 0.0;
    double theta_prime = 0.0;
};

SpeedmapRow run_speedmap_point(const ExperimentConfig& cfg, double eps, const fs::path& dir,
                               ArtifactSet& artifacts, const std::string& tag) {
    const auto t0 = Clock::now();
    const ProblemSpec spec = cfg.make_problem(eps);
    double lo = cfg.experiment.xi_min, hi = cfg.experiment.xi_max;
    if (lo == hi) {
        lo = -0.6 * spec.grid.ell;
        hi = 0.6 * spec.grid.ell;
    }
    std::vector<double> xi_grid(cfg.experiment.xi_count);
    for (int i = 0; i < cfg.experiment.xi_count; ++i)
        xi_grid[i] = lo + (hi - lo) * i / (cfg.experiment.xi_count - 1);
    const SpeedMode mode = cfg.experiment.fast ? SpeedMode::fast : SpeedMode::accurate;
    const SpeedMap map = build_speed_map(spec, xi_grid, mode);
    {
        CsvWriter csv(artifacts.track(dir / ("speedmap" + tag + ".csv")),
                      {"xi", "sign_theta", "log10_abs_theta"});
        for (std::size_t i = 0; i < map.xi_grid.size(); ++i)
            csv.row({map.xi_grid[i], static_cast<double>(map.theta[i].sign),
                     log10_signed(map.theta[i])});
    }
    json meta;
    meta["epsilon"] = eps;
    meta["xi_star"] = map.xi_star;
    meta["theta_prime_at_star"] = map.theta_prime_at_star;
    meta["mode"] = cfg.experiment.fast ? "fast" : "accurate";
    try {
        meta["beta"] = decay_rate(spec, mode);
    } catch (const std::domain_error& err) {
        meta["beta"] = nullptr;
        meta["beta_error"] = err.what();
    }
    meta["config"] = config_echo(cfg);
    meta["wall_seconds"] = elapsed_s(t0);
    write_json_file(artifacts.track(dir / ("speedmap_metadata" + tag + ".json")), meta);

    std::ostringstream os;
    os << "speedmap eps=" << eps << " xi_star=" << map.xi_star
       << " theta_prime=" << map.theta_prime_at_star << " (" << elapsed_s(t0) << " s)";
    log_line(LogLevel::info, os.str());
    return {eps, map.xi_star, map.theta_prime_at_star};
}

void run_speedmap(const ExperimentConfig& cfg, const fs::path& dir, ArtifactSet& artifacts) {
    const bool multi = cfg.problem.epsilons.size() > 1;
    for (double eps : cfg.problem.epsilons)
        run_speedmap_point(cfg, eps, dir, artifacts, multi ? "_eps" + eps_tag(eps) : "");
}

void run_slow_motion(const ExperimentConfig& cfg, const fs::path& dir, ArtifactSet& artifacts,
                     int jobs) {
    const std::vector<double>& epsilons = cfg.problem.epsilons;
    const SpeedMode mode = cfg.experiment.fast ? SpeedMode::fast : SpeedMode::accurate;
    struct Row {
        double eps, t_half, beta;
    };
    std::vector<Row> rows(epsilons.size());
    parallel_for(epsilons.size(), jobs, [&](std::size_t i) {
        const auto t0 = Clock::now();
        const double eps = epsilons[i];
        const ProblemSpec spec = cfg.make_problem(eps);
        ReducedIntegration opts;
        opts.mode = mode;
        const InterfaceTrajectory traj = integrate_interface(spec, cfg.experiment.xi0, opts);
        const double t_half = halving_time(spec, cfg.experiment.xi0, mode);
        const double beta = decay_rate(spec, mode);
        const double xi_star = equilibrium_abscissa(spec);
        {
            CsvWriter csv(
                artifacts.track(dir / ("slow_motion_traj_eps" + eps_tag(eps) + ".csv")),
                {"t", "xi", "log10_dist_to_star"});
            for (std::size_t k = 0; k < traj.times.size(); ++k) {
                const double dist = std::max(std::abs(traj.xi[k] - xi_star), 1e-300);
                csv.row({traj.times[k], traj.xi[k], std::log10(dist)});
            }
        }
        rows[i] = {eps, t_half, beta};
        std::ostringstream os;
        os << "slow-motion eps=" << eps << " t_half=" << t_half << " beta=" << beta << " ("
           << elapsed_s(t0) << " s)";
        log_line(LogLevel::info, os.str());
    });

    {
        CsvWriter csv(artifacts.track(dir / "slow_motion.csv"), {"epsilon", "t_half", "beta"});
        for (const Row& r : rows) csv.row({r.eps, r.t_half, r.beta});
    }
    json summary;
    summary["config"] = config_echo(cfg);
    if (rows.size() >= 2) {
        std::vector<double> xs, ys;
        for (const Row& r : rows) {
            xs.push_back(1.0 / r.eps);
            ys.push_back(std::log(r.t_half));
        }
        const LinearFit fit = linear_fit(xs, ys);
        summary["fit"] = {{"c", fit.slope},
                          {"intercept", fit.intercept},
                          {"r_squared", fit.r_squared},
                          {"c_ci95", {fit.slope - 2.0 * fit.slope_stderr,
                                      fit.slope + 2.0 * fit.slope_stderr}}};
    } else {
        summary["fit"] = nullptr;
    }
    write_json_file(artifacts.track(dir / "slow_motion_summary.json"), summary);
}

void run_simulate(const ExperimentConfig& cfg, const fs::path& dir, ArtifactSet& artifacts) {
    const bool multi = cfg.problem.epsilons.size() > 1;
    for (double eps : cfg.problem.epsilons) {
        const auto t0 = Clock::now();
        const ProblemSpec spec = cfg.make_problem(eps);
        const ExperimentParams& p = cfg.experiment;
        std::vector<double> u0;
        if (p.initial == "member") {
            u0 = build_approx_member(spec, p.xi0).profile;
        } else if (p.initial == "member-bump") {
            u0 = member_plus_bump(spec, p.xi0, p.amplitude, p.center, p.width);
        } else if (p.initial == "riemann") {
            u0 = smoothed_riemann(spec, p.xi0, p.width);
        } else {
            u0 = build_exact_steady(spec).profile;
        }
        IntegratorConfig icfg;
        icfg.t_end = p.t_end;
        icfg.snapshot_count = static_cast<std::size_t>(p.snapshot_count);
        icfg.projection_modes = static_cast<std::size_t>(p.modes);
        const RunResult result = run_experiment(spec, u0, icfg);

        const std::string tag = multi ? "_eps" + eps_tag(eps) : "";
        {
            CsvWriter csv(artifacts.track(dir / ("simulate_trajectory" + tag + ".csv")),
                          {"t", "xi_hat", "v_L2", "v_Linf", "dv_L2", "v1_resid"});
            for (const Snapshot& s : result.snapshots)
                csv.row({s.t, s.xi_hat, s.v_norms.l2, s.v_norms.linf, s.v_norms.h1_semi,
                         s.xi_residual});
        }
        for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
            char idx[16];
            std::snprintf(idx, sizeof(idx), "%03zu", k);
            CsvWriter csv(
                artifacts.track(dir / ("simulate_snapshot_" + std::string(idx) + tag + ".csv")),
                {"x", "u"});
            for (int i = 0; i < spec.grid.n(); ++i)
                csv.row({spec.grid.x[i], result.snapshots[k].u[i]});
        }
        json meta;
        meta["epsilon"] = eps;
        meta["scheme"] = icfg.scheme;
        meta["tolerances"] = {{"cfl_safety", icfg.cfl_safety},
                              {"extraction_xtol", 1e-10 * spec.grid.ell},
                              {"boundary_value_tol", 1e-6}};
        meta["steps"] = result.final_state.steps;
        meta["max_mass_defect"] = result.final_state.max_mass_defect;
        meta["blew_up"] = result.blew_up;
        meta["config"] = config_echo(cfg);
        meta["wall_seconds"] = elapsed_s(t0);
        write_json_file(artifacts.track(dir / ("simulate_metadata" + tag + ".json")), meta);

        std::ostringstream os;
        os << "simulate eps=" << eps << " steps=" << result.final_state.steps
           << " xi_end=" << result.trajectory.xi.back() << " (" << elapsed_s(t0) << " s)";
        log_line(LogLevel::info, os.str());

        if (result.blew_up) {
            std::ostringstream err;
            err << "simulate: solution blew up at t = " << result.blow_up_time
                << "; partial artifacts flushed";
            throw std::runtime_error(err.str());
        }
    }
}

void run_sweep(const ExperimentConfig& cfg, const fs::path& dir, ArtifactSet& artifacts,
               int jobs) {
    const std::vector<double>& epsilons = cfg.problem.epsilons;
    if (cfg.experiment.inner_kind == "spectrum") {
        std::vector<SpectrumRow> rows(epsilons.size());
        parallel_for(epsilons.size(), jobs, [&](std::size_t i) {
            rows[i] = run_spectrum_point(cfg, epsilons[i], dir, artifacts,
                                         "_eps" + eps_tag(epsilons[i]));
        });
        {
            CsvWriter csv(artifacts.track(dir / "sweep_spectrum.csv"),
                          {"epsilon", "lambda1", "lambda2", "gap"});
            for (const SpectrumRow& r : rows) csv.row({r.epsilon, r.lambda1, r.lambda2, r.gap});
        }
        json summary;
        summary["config"] = config_echo(cfg);
        bool all_negative = true;
        for (const SpectrumRow& r : rows) all_negative = all_negative && r.lambda1 < 0.0;
        summary["lambda1_all_negative"] = all_negative;
        if (rows.size() >= 2) {
            std::vector<double> xs, ys;
            for (const SpectrumRow& r : rows) {
                xs.push_back(1.0 / r.epsilon);
                ys.push_back(std::log(std::abs(r.lambda1)));
            }
            const LinearFit fit = linear_fit(xs, ys);
            summary["fit"] = {{"slope", fit.slope},
                              {"intercept", fit.intercept},
                              {"r_squared", fit.r_squared}};
        } else {
            summary["fit"] = nullptr;
        }
        write_json_file(artifacts.track(dir / "sweep_summary.json"), summary);
    } else {
        std::vector<SpeedmapRow> rows(epsilons.size());
        parallel_for(epsilons.size(), jobs, [&](std::size_t i) {
            rows[i] = run_speedmap_point(cfg, epsilons[i], dir, artifacts,
                                         "_eps" + eps_tag(epsilons[i]));
        });
        {
            CsvWriter csv(artifacts.track(dir / "sweep_speedmap.csv"),
                          {"epsilon", "xi_star", "theta_prime_at_star"});
            for (const SpeedmapRow& r : rows) csv.row({r.epsilon, r.xi_star, r.theta_prime});
        }
        json summary;
        summary["config"] = config_echo(cfg);
        if (rows.size() >= 2) {
            std::vector<double> xs, ys;
            for (const SpeedmapRow& r : rows) {
                xs.push_back(1.0 / r.epsilon);
                ys.push_back(std::log(std::abs(r.theta_prime)));
            }
            const LinearFit fit = linear_fit(xs, ys);
            summary["fit"] = {{"slope", fit.slope},
                              {"intercept", fit.intercept},
                              {"r_squared", fit.r_squared}};
        } else {
            summary["fit"] = nullptr;
        }
        write_json_file(artifacts.track(dir / "sweep_summary.json"), summary);
    }
}

// ------------------------------------------------------------------ presets

ExperimentConfig burgers_base(std::vector<double> epsilons, int n) {
    ExperimentConfig cfg;
    cfg.problem.epsilons = std::move(epsilons);
    cfg.problem.ell = 1.0;
    cfg.problem.n = n;
    cfg.problem.u_minus = 1.0;
    cfg.problem.u_plus = -1.0;
    return cfg;
}

void preset_eigen_scaling(const fs::path& dir, int jobs) {
    ExperimentConfig cfg = burgers_base({0.06, 0.07, 0.08, 0.09, 0.10, 0.11, 0.12}, 2001);
    cfg.experiment.kind = "sweep";
    cfg.experiment.inner_kind = "spectrum";
    cfg.experiment.xi = 0.2;
    cfg.experiment.modes = 4;

    ArtifactSet artifacts;
    std::vector<SpectrumRow> rows(cfg.problem.epsilons.size());
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        const double eps = cfg.problem.epsilons[i];
        const auto t0 = Clock::now();
        const ProblemSpec spec = cfg.make_problem(eps);
        const ApproxSteadyState member = build_approx_member(spec, cfg.experiment.xi);
        const SpectrumResult result = spectrum_of_L(spec, member, 4);
        rows[i] = {eps, result.eigenvalues[0], result.eigenvalues[1], result.gap};
        std::ostringstream os;
        os << "eigen-scaling eps=" << eps << " lambda1=" << result.eigenvalues[0]
           << " lambda2=" << result.eigenvalues[1] << " (" << elapsed_s(t0) << " s)";
        log_line(LogLevel::info, os.str());
    });
    {
        CsvWriter csv(artifacts.track(dir / "eigen_scaling.csv"),
                      {"epsilon", "lambda1", "lambda2", "gap"});
        for (const SpectrumRow& r : rows) csv.row({r.epsilon, r.lambda1, r.lambda2, r.gap});
    }
    std::vector<double> xs, ys;
    double el2_min = 0.0, el2_max = 0.0;
    bool all_negative = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        xs.push_back(1.0 / rows[i].epsilon);
        ys.push_back(std::log(std::abs(rows[i].lambda1)));
        all_negative = all_negative && rows[i].lambda1 < 0.0;
        const double el2 = rows[i].epsilon * rows[i].lambda2;
        if (i == 0) el2_min = el2_max = el2;
        el2_min = std::min(el2_min, el2);
        el2_max = std::max(el2_max, el2);
    }
    const LinearFit fit = linear_fit(xs, ys);
    json summary;
    summary["fit"] = {{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"r_squared", fit.r_squared}};
    summary["lambda1_all_negative"] = all_negative;
    summary["eps_lambda2_min"] = el2_min;
    summary["eps_lambda2_max"] = el2_max;
    summary["config"] = config_echo(cfg);
    write_json_file(artifacts.track(dir / "eigen_scaling_summary.json"), summary);
    artifacts.commit();
}

void preset_residual_map(const fs::path& dir, int jobs) {
    ExperimentConfig cfg =
        burgers_base({0.05, 0.06, 0.07, 0.08, 0.09, 0.10, 0.11, 0.12}, 1001);
    cfg.experiment.kind = "sweep";
    cfg.experiment.inner_kind = "speedmap";

    constexpr int kXiCount = 41;
    const double fit_xi = 0.2;
    struct EpsRows {
        std::vector<double> xi, log10_omega;
        double log10_at_fit_xi = 0.0;
        double star_ratio = 0.0;  // Omega(xi_star) / min Omega(xi_star -+ 0.3 ell)
    };
    std::vector<EpsRows> all(cfg.problem.epsilons.size());
    parallel_for(all.size(), jobs, [&](std::size_t i) {
        const double eps = cfg.problem.epsilons[i];
        const auto t0 = Clock::now();
        const ProblemSpec spec = cfg.make_problem(eps);
        EpsRows& rows = all[i];
        for (int k = 0; k < kXiCount; ++k) {
            const double xi = -0.6 + 1.2 * k / (kXiCount - 1);
            const SignedLog omega =
                omega_residual_log(spec, build_approx_member(spec, xi));
            rows.xi.push_back(xi);
            rows.log10_omega.push_back(log10_signed(omega));
        }
        const SignedLog at_fit = omega_residual_log(spec, build_approx_member(spec, fit_xi));
        rows.log10_at_fit_xi = log10_signed(at_fit);
        const double xi_star = equilibrium_abscissa(spec);
        const SignedLog at_star = omega_residual_log(spec, build_approx_member(spec, xi_star));
        const SignedLog off_m =
            omega_residual_log(spec, build_approx_member(spec, xi_star - 0.3 * spec.grid.ell));
        const SignedLog off_p =
            omega_residual_log(spec, build_approx_member(spec, xi_star + 0.3 * spec.grid.ell));
        const double off_log = std::min(off_m.log_abs, off_p.log_abs);
        rows.star_ratio = std::exp(at_star.log_abs - off_log);
        std::ostringstream os;
        os << "residual-map eps=" << eps << " log10_omega(0.2)=" << rows.log10_at_fit_xi
           << " star_ratio=" << rows.star_ratio << " (" << elapsed_s(t0) << " s)";
        log_line(LogLevel::info, os.str());
    });

    ArtifactSet artifacts;
    {
        CsvWriter csv(artifacts.track(dir / "residual_map.csv"),
                      {"epsilon", "xi", "log10_omega"});
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t k = 0; k < all[i].xi.size(); ++k)
                csv.row({cfg.problem.epsilons[i], all[i].xi[k], all[i].log10_omega[k]});
    }
    {
        CsvWriter csv(artifacts.track(dir / "residual_fit.csv"), {"epsilon", "log10_omega"});
        for (std::size_t i = 0; i < all.size(); ++i)
            csv.row({cfg.problem.epsilons[i], all[i].log10_at_fit_xi});
    }
    std::vector<double> xs, ys;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        xs.push_back(1.0 / cfg.problem.epsilons[i]);
        ys.push_back(all[i].log10_at_fit_xi);
        worst_ratio = std::max(worst_ratio, all[i].star_ratio);
    }
    const LinearFit fit = linear_fit(xs, ys);
    json summary;
    summary["fit_at_xi"] = fit_xi;
    summary["fit"] = {{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"r_squared", fit.r_squared}};
    summary["max_star_to_offset_ratio"] = worst_ratio;
    summary["config"] = config_echo(cfg);
    write_json_file(artifacts.track(dir / "residual_summary.json"), summary);
    artifacts.commit();
}

void preset_slow_motion(const fs::path& dir, int jobs) {
    ExperimentConfig cfg = burgers_base({0.07, 0.08, 0.09, 0.10}, 1001);
    cfg.experiment.kind = "slow-motion";
    cfg.experiment.xi0 = 0.3;
    ArtifactSet artifacts;
    run_slow_motion(cfg, dir, artifacts, jobs);
    artifacts.commit();
}

void preset_pde_vs_reduced(const fs::path& dir, int jobs) {
    (void)jobs;  // single trajectory pair; the PDE run dominates
    const auto t0 = Clock::now();
    ExperimentConfig cfg = burgers_base({0.1}, 1001);
    cfg.experiment.kind = "simulate";
    cfg.experiment.xi0 = 0.3;
    cfg.experiment.t_end = 2000.0;
    const ProblemSpec spec = cfg.make_problem(0.1);

    IntegratorConfig icfg;
    icfg.t_end = cfg.experiment.t_end;
    icfg.snapshot_count = 40;
    const std::vector<double> u0 = build_approx_member(spec, cfg.experiment.xi0).profile;
    const RunResult pde = run_experiment(spec, u0, icfg);

    ReducedIntegration opts;
    opts.output_times = pde.trajectory.times;
    const InterfaceTrajectory reduced =
        integrate_interface(spec, cfg.experiment.xi0, opts);

    const double xi_star = equilibrium_abscissa(spec);
    const double h = spec.grid.h;
    const double tolerance =
        std::max(5.0 * h, 0.05 * std::abs(cfg.experiment.xi0 - xi_star));
    double max_diff_after_transient = 0.0;
    ArtifactSet artifacts;
    {
        CsvWriter csv(artifacts.track(dir / "pde_vs_reduced.csv"),
                      {"t", "xi_pde", "xi_reduced", "abs_diff"});
        for (std::size_t i = 0; i < pde.trajectory.times.size(); ++i) {
            const double diff = std::abs(pde.trajectory.xi[i] - reduced.xi[i]);
            csv.row({pde.trajectory.times[i], pde.trajectory.xi[i], reduced.xi[i], diff});
            if (pde.trajectory.times[i] >= 10.0)
                max_diff_after_transient = std::max(max_diff_after_transient, diff);
        }
    }
    json summary;
    summary["epsilon"] = 0.1;
    summary["xi0"] = cfg.experiment.xi0;
    summary["tolerance"] = tolerance;
    summary["max_discrepancy_after_transient"] = max_diff_after_transient;
    summary["pass"] = max_diff_after_transient <= tolerance;
    summary["pde_steps"] = pde.final_state.steps;
    summary["max_mass_defect"] = pde.final_state.max_mass_defect;
    summary["config"] = config_echo(cfg);
    summary["wall_seconds"] = elapsed_s(t0);
    write_json_file(artifacts.track(dir / "pde_vs_reduced_summary.json"), summary);
    artifacts.commit();

    std::ostringstream os;
    os << "pde-vs-reduced max_diff=" << max_diff_after_transient << " tol=" << tolerance << " ("
       << elapsed_s(t0) << " s)";
    log_line(LogLevel::info, os.str());
}

}  // namespace

void run_experiment_config(const ExperimentConfig& cfg, const std::string& out_dir, int jobs) {
    const fs::path dir =
        prepare_dir(out_dir.empty() ? cfg.experiment.output_dir : out_dir);
    const std::string& kind = cfg.experiment.kind;
    ArtifactSet artifacts;
    if (kind == "steady") {
        run_steady(cfg, dir, artifacts);
    } else if (kind == "spectrum") {
        run_spectrum(cfg, dir, artifacts);
    } else if (kind == "speedmap") {
        run_speedmap(cfg, dir, artifacts);
    } else if (kind == "slow-motion") {
        run_slow_motion(cfg, dir, artifacts, jobs);
    } else if (kind == "simulate") {
        run_simulate(cfg, dir, artifacts);
    } else if (kind == "sweep") {
        run_sweep(cfg, dir, artifacts, jobs);
    } else {
        throw ConfigError("experiment.kind: unknown experiment kind '" + kind + "'");
    }
    artifacts.commit();
}

void run_preset(const std::string& name, const std::string& out_dir, int jobs) {
    const fs::path dir = prepare_dir(out_dir.empty() ? std::string("out") : out_dir);
    if (name == "eigen-scaling") {
        preset_eigen_scaling(dir, jobs);
    } else if (name == "residual-map") {
        preset_residual_map(dir, jobs);
    } else if (name == "slow-motion") {
        preset_slow_motion(dir, jobs);
    } else if (name == "pde-vs-reduced") {
        preset_pde_vs_reduced(dir, jobs);
    } else {
        throw ConfigError(
            "preset: unknown name '" + name +
            "' (expected eigen-scaling, residual-map, slow-motion, or pde-vs-reduced)");
    }
}

}  // namespace mfront
