#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfront/config.hpp"
#include "mfront/steady.hpp"

#ifndef MFRONT_CLI_BINARY
#error "MFRONT_CLI_BINARY must point at the built command line tool"
#endif
#ifndef MFRONT_CONFIG_DIR
#error "MFRONT_CONFIG_DIR must point at the example configuration directory"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "missing file: " << p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& hint) {
    static std::atomic<int> counter{0};
    const fs::path p = fs::temp_directory_path() /
                       ("mfront_cli_" + hint + "_" + std::to_string(counter++));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// Runs the CLI through the shell, capturing both streams and the exit code.
CliResult run_cli(const std::string& args, const std::string& env = "") {
    const fs::path dir = fresh_dir("io");
    const fs::path out_file = dir / "stdout.txt";
    const fs::path err_file = dir / "stderr.txt";
    std::string cmd = env.empty() ? "" : env + " ";
    cmd += std::string(MFRONT_CLI_BINARY) + " " + args + " >" + out_file.string() + " 2>" +
           err_file.string();
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::string config_path(const std::string& name) {
    return (fs::path(MFRONT_CONFIG_DIR) / name).string();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> parse_csv_row(const std::string& line) {
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::strtod(tok.c_str(), nullptr));
    return vals;
}

fs::path write_temp_config(const std::string& text) {
    const fs::path p = fresh_dir("cfg") / "config.json";
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

}  // namespace

TEST_CASE("steady subcommand writes profile and metadata with exact round-trip") {
    const fs::path out = fresh_dir("steady");
    const CliResult r =
        run_cli("steady --config " + config_path("steady_burgers.json") + " --out " + out.string());
    CHECK(r.exit_code == 0);

    const std::string csv = slurp(out / "steady_profile.csv");
    const std::vector<std::string> rows = lines_of(csv);
    REQUIRE(rows.size() == 2002);  // header + one row per node
    CHECK(rows[0] == "x,u");
    CHECK(csv.find('\r') == std::string::npos);

    const json meta = json::parse(slurp(out / "steady_metadata.json"));
    // level constant for the quadratic flux: half the squared tail amplitude
    CHECK(meta.at("kappa").get<double>() == doctest::Approx(0.5000907259).epsilon(1e-6));
    CHECK(std::abs(meta.at("x_star").get<double>()) <= 1e-12);
    CHECK(meta.at("boundary_residual").get<double>() <= 1e-8);
    CHECK(meta.at("wall_seconds").get<double>() >= 0.0);
    CHECK(meta.contains("config"));

    // %.17g emission round-trips bit-exactly against an in-process rebuild
    const mfront::ExperimentConfig cfg =
        mfront::ExperimentConfig::load_file(config_path("steady_burgers.json"));
    const mfront::ProblemSpec spec = cfg.make_problem(0.1);
    const mfront::ExactSteadyState steady = mfront::build_exact_steady(spec);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::vector<double> vals = parse_csv_row(rows[i]);
        REQUIRE(vals.size() == 2);
        CHECK(vals[0] == spec.grid.x[i - 1]);
        CHECK(vals[1] == steady.profile[i - 1]);
    }
}

TEST_CASE("steady run with a variable coefficient lands the equilibrium abscissa") {
    const fs::path out = fresh_dir("varcoef");
    const CliResult r =
        run_cli("steady --config " + config_path("steady_varcoef.json") + " --out " + out.string());
    CHECK(r.exit_code == 0);
    const json meta = json::parse(slurp(out / "steady_metadata.json"));
    // for a(x) = e^x the half-mass point of 1/a sits at -log(cosh(1))
    CHECK(meta.at("x_star").get<double>() ==
          doctest::Approx(-std::log(std::cosh(1.0))).epsilon(1e-6));
}

TEST_CASE("repeated runs are byte-identical") {
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    const std::string base = "steady --config " + config_path("steady_burgers.json") + " --out ";
    CHECK(run_cli(base + a.string()).exit_code == 0);
    CHECK(run_cli(base + b.string()).exit_code == 0);
    CHECK(slurp(a / "steady_profile.csv") == slurp(b / "steady_profile.csv"));
}

TEST_CASE("spectrum subcommand emits eigenvalues, modes, and metadata") {
    const fs::path out = fresh_dir("spectrum");
    const CliResult r = run_cli("spectrum --config " + config_path("spectrum_front.json") +
                                " --out " + out.string());
    CHECK(r.exit_code == 0);

    const std::vector<std::string> rows = lines_of(slurp(out / "spectrum.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "k,lambda,residual");
    const std::vector<double> first = parse_csv_row(rows[1]);
    REQUIRE(first.size() == 3);
    CHECK(first[0] == 1.0);
    CHECK(first[1] == doctest::Approx(-3.399504e-3).epsilon(1e-3));
    CHECK(first[2] <= 1e-8);

    const std::vector<std::string> modes = lines_of(slurp(out / "spectrum_modes.csv"));
    CHECK(modes[0] == "x,phi1,phi2,phi3,phi4,psi1,psi2,psi3,psi4");
    CHECK(modes.size() == 1002);

    const json meta = json::parse(slurp(out / "spectrum_metadata.json"));
    REQUIRE(meta.at("eigenvalues").size() == 4);
    CHECK(meta.at("eigenvalues")[0].get<double>() < 0.0);
    CHECK(meta.at("eigenvalues")[1].get<double>() < meta.at("eigenvalues")[0].get<double>());
    CHECK(meta.at("gap").get<double>() > 0.0);
}

TEST_CASE("speedmap subcommand tabulates the sign structure of the speed") {
    const fs::path out = fresh_dir("speedmap");
    const CliResult r = run_cli("speedmap --config " + config_path("speedmap_scan.json") +
                                " --out " + out.string());
    CHECK(r.exit_code == 0);

    const std::vector<std::string> rows = lines_of(slurp(out / "speedmap.csv"));
    REQUIRE(rows.size() == 22);
    CHECK(rows[0] == "xi,sign_theta,log10_abs_theta");
    CHECK(parse_csv_row(rows[1])[1] == 1.0);          // left of center: pushes right
    CHECK(parse_csv_row(rows[21])[1] == -1.0);        // right of center: pushes left

    const json meta = json::parse(slurp(out / "speedmap_metadata.json"));
    CHECK(std::abs(meta.at("xi_star").get<double>()) <= 1e-8);
    CHECK(meta.at("theta_prime_at_star").get<double>() < 0.0);
    CHECK(meta.at("beta").get<double>() > 0.0);
    CHECK(meta.at("mode").get<std::string>() == "fast");
}

TEST_CASE("slow-motion subcommand reports halving times and the viscosity fit") {
    const fs::path out = fresh_dir("slowmo");
    const CliResult r = run_cli("slow-motion --config " + config_path("slow_motion_sweep.json") +
                                " --out " + out.string() + " --jobs 2");
    CHECK(r.exit_code == 0);

    const std::vector<std::string> rows = lines_of(slurp(out / "slow_motion.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "epsilon,t_half,beta");
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::vector<double> vals = parse_csv_row(rows[i]);
        REQUIRE(vals.size() == 3);
        CHECK(vals[1] < prev);  // halving time falls as viscosity grows
        CHECK(vals[2] > 0.0);
        prev = vals[1];
    }
    for (const char* tag : {"0.07", "0.08", "0.09", "0.1"})
        CHECK(fs::exists(out / ("slow_motion_traj_eps" + std::string(tag) + ".csv")));

    const json summary = json::parse(slurp(out / "slow_motion_summary.json"));
    CHECK(summary.at("fit").at("c").get<double>() > 0.0);
    CHECK(summary.at("fit").at("r_squared").get<double>() >= 0.98);
}

TEST_CASE("simulate subcommand writes trajectory, snapshots, and run metadata") {
    const fs::path out = fresh_dir("simulate");
    const CliResult r = run_cli("simulate --config " + config_path("simulate_relaxation.json") +
                                " --out " + out.string());
    CHECK(r.exit_code == 0);

    const std::vector<std::string> rows = lines_of(slurp(out / "simulate_trajectory.csv"));
    CHECK(rows[0] == "t,xi_hat,v_L2,v_Linf,dv_L2,v1_resid");
    REQUIRE(rows.size() == 14);  // t = 0 plus snapshot_count log-spaced times
    double peak = 0.0, last = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::vector<double> vals = parse_csv_row(rows[i]);
        REQUIRE(vals.size() == 6);
        peak = std::max(peak, vals[2]);
        last = vals[2];
        CHECK(std::abs(vals[5]) <= 1e-6 * vals[2] + 1e-12);  // slow-mode residual bound
    }
    CHECK(last < peak);

    for (int k = 0; k < 13; ++k) {
        char name[48];
        std::snprintf(name, sizeof(name), "simulate_snapshot_%03d.csv", k);
        CHECK(fs::exists(out / name));
    }
    CHECK(lines_of(slurp(out / "simulate_snapshot_000.csv"))[0] == "x,u");

    const json meta = json::parse(slurp(out / "simulate_metadata.json"));
    CHECK(meta.at("blew_up").get<bool>() == false);
    CHECK(meta.at("steps").get<long long>() > 0);
    CHECK(meta.at("max_mass_defect").get<double>() <= 1e-8);
    CHECK(meta.at("scheme").get<std::string>() == "imex-llf");
    CHECK(meta.at("tolerances").contains("cfl_safety"));
    CHECK(meta.at("wall_seconds").get<double>() > 0.0);
}

TEST_CASE("sweep subcommand aggregates spectra over the viscosity list") {
    // small private sweep so the CLI case stays quick
    const fs::path cfg = write_temp_config(R"({
      "problem": {
        "epsilon": [0.08, 0.1, 0.12], "ell": 1.0, "n": 401,
        "flux": {"kind": "burgers"}, "u_minus": 1.0, "u_plus": -1.0
      },
      "experiment": {"kind": "sweep", "inner_kind": "spectrum", "xi": 0.2, "modes": 2}
    })");
    const fs::path out = fresh_dir("sweep");
    const CliResult r =
        run_cli("sweep --config " + cfg.string() + " --out " + out.string() + " --jobs 2");
    CHECK(r.exit_code == 0);

    const std::vector<std::string> rows = lines_of(slurp(out / "sweep_spectrum.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "epsilon,lambda1,lambda2,gap");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(parse_csv_row(rows[i])[1] < 0.0);
    for (const char* tag : {"0.08", "0.1", "0.12"}) {
        CHECK(fs::exists(out / ("spectrum_eps" + std::string(tag) + ".csv")));
        CHECK(fs::exists(out / ("spectrum_metadata_eps" + std::string(tag) + ".json")));
    }

    const json summary = json::parse(slurp(out / "sweep_summary.json"));
    CHECK(summary.at("lambda1_all_negative").get<bool>());
    CHECK(summary.at("fit").at("slope").get<double>() < 0.0);
}

TEST_CASE("a failing sweep renames finished artifacts with a _partial suffix") {
    // the second viscosity is far below what the geometry can represent,
    // so its branch solve aborts the run after the first point finished
    const fs::path cfg = write_temp_config(R"({
      "problem": {
        "epsilon": [0.1, 1e-4], "ell": 1.0, "n": 401,
        "flux": {"kind": "burgers"}, "u_minus": 1.0, "u_plus": -1.0
      },
      "experiment": {"kind": "sweep", "inner_kind": "spectrum", "xi": 0.2, "modes": 2}
    })");
    const fs::path out = fresh_dir("partial");
    const CliResult r =
        run_cli("sweep --config " + cfg.string() + " --out " + out.string() + " --jobs 2");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("error") != std::string::npos);

    CHECK(fs::exists(out / "spectrum_eps0.1_partial.csv"));
    CHECK(fs::exists(out / "spectrum_metadata_eps0.1_partial.json"));
    CHECK_FALSE(fs::exists(out / "spectrum_eps0.1.csv"));
    CHECK_FALSE(fs::exists(out / "sweep_spectrum.csv"));
    CHECK_FALSE(fs::exists(out / "sweep_spectrum_partial.csv"));
}

TEST_CASE("config validation failures exit with code 2 and name the field") {
    const fs::path out = fresh_dir("bad");

    SUBCASE("negative viscosity") {
        const fs::path cfg = write_temp_config(R"({
          "problem": {"epsilon": -0.1, "ell": 1.0, "n": 101},
          "experiment": {"kind": "steady"}
        })");
        const CliResult r = run_cli("steady --config " + cfg.string() + " --out " + out.string());
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("problem.epsilon") != std::string::npos);
    }

    SUBCASE("unknown key is rejected") {
        const fs::path cfg = write_temp_config(R"({
          "problem": {"epsilon": 0.1, "ell": 1.0, "n": 101, "epsilonn": 2},
          "experiment": {"kind": "steady"}
        })");
        const CliResult r = run_cli("steady --config " + cfg.string() + " --out " + out.string());
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("unexpected key 'epsilonn'") != std::string::npos);
    }

    SUBCASE("syntactically broken JSON") {
        const fs::path cfg = write_temp_config("{ \"problem\": ");
        const CliResult r = run_cli("steady --config " + cfg.string() + " --out " + out.string());
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("parse failure") != std::string::npos);
    }

    SUBCASE("kind mismatch between config and subcommand") {
        const CliResult r = run_cli("spectrum --config " + config_path("steady_burgers.json") +
                                    " --out " + out.string());
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("experiment.kind") != std::string::npos);
    }

    SUBCASE("missing config file") {
        const CliResult r = run_cli("steady --config /no/such/file.json");
        CHECK(r.exit_code == 2);
    }

    SUBCASE("missing required --config option") {
        CHECK(run_cli("steady").exit_code == 2);
    }

    SUBCASE("unknown subcommand") {
        CHECK(run_cli("frobnicate").exit_code == 2);
    }

    SUBCASE("no subcommand at all") {
        CHECK(run_cli("").exit_code == 2);
    }
}

TEST_CASE("repro subcommand validates its preset name") {
    const CliResult r = run_cli("repro nonsense --out " + fresh_dir("repro_bad").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("preset") != std::string::npos);
}

TEST_CASE("repro eigen-scaling reproduces the viscosity scaling study") {
    const fs::path out = fresh_dir("repro_eigen");
    const CliResult r = run_cli("repro eigen-scaling --out " + out.string() + " --jobs 4");
    CHECK(r.exit_code == 0);

    const std::vector<std::string> rows = lines_of(slurp(out / "eigen_scaling.csv"));
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == "epsilon,lambda1,lambda2,gap");

    const json summary = json::parse(slurp(out / "eigen_scaling_summary.json"));
    CHECK(summary.at("lambda1_all_negative").get<bool>());
    CHECK(summary.at("fit").at("slope").get<double>() < 0.0);
    CHECK(summary.at("fit").at("r_squared").get<double>() >= 0.99);
    CHECK(summary.at("eps_lambda2_max").get<double>() < 0.0);
    CHECK(summary.at("eps_lambda2_min").get<double>() >=
          3.0 * summary.at("eps_lambda2_max").get<double>());
}

TEST_CASE("MFRONT_LOG=quiet silences the per-point progress lines") {
    const fs::path out = fresh_dir("log");
    const std::string base =
        "steady --config " + config_path("steady_varcoef.json") + " --out " + out.string();
    const CliResult noisy = run_cli(base);
    CHECK(noisy.out.find("[mfront]") != std::string::npos);
    const CliResult quiet = run_cli(base, "MFRONT_LOG=quiet");
    CHECK(quiet.exit_code == 0);
    CHECK(quiet.out.find("[mfront]") == std::string::npos);
}

TEST_CASE("every shipped example config parses and round-trips") {
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(MFRONT_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        ++seen;
        const mfront::ExperimentConfig cfg =
            mfront::ExperimentConfig::load_file(entry.path().string());
        const std::string text = cfg.to_json_text();
        const mfront::ExperimentConfig again = mfront::ExperimentConfig::from_json_text(text);
        CHECK(again.to_json_text() == text);
        CHECK(!cfg.problem.epsilons.empty());
        const mfront::ProblemSpec spec = cfg.make_problem(cfg.problem.epsilons.front());
        CHECK(spec.grid.n() == cfg.problem.n);
    }
    CHECK(seen == 7);
}
