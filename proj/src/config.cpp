#include "mfront/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mfront {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

// Strictness: every key present must be in the allowed set.
void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    for (const auto& item : obj.items())
        if (allowed.find(item.key()) == allowed.end())
            fail(path, "unexpected key '" + item.key() + "'");
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> as_number_list(const json& j, const std::string& path) {
    std::vector<double> out;
    if (j.is_number()) {
        out.push_back(j.get<double>());
        return out;
    }
    if (!j.is_array()) fail(path, "expected a number or an array of numbers");
    std::size_t idx = 0;
    for (const auto& item : j) {
        if (!item.is_number()) fail(path + "[" + std::to_string(idx) + "]", "expected a number");
        out.push_back(item.get<double>());
        ++idx;
    }
    if (out.empty()) fail(path, "expected a nonempty array");
    return out;
}

ProblemConfig parse_problem(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j,
               {"epsilon", "ell", "n", "diffusion", "flux", "u_minus", "u_plus"},
               path);
    ProblemConfig p;
    if (!j.contains("epsilon")) fail(path, "missing required key 'epsilon'");
    p.epsilons = as_number_list(j.at("epsilon"), path + ".epsilon");
    for (double e : p.epsilons)
        if (!(e > 0.0)) fail(path + ".epsilon", "entries must be positive");
    if (!j.contains("ell")) fail(path, "missing required key 'ell'");
    p.ell = as_number(j.at("ell"), path + ".ell");
    if (!(p.ell > 0.0)) fail(path + ".ell", "must be positive");
    if (!j.contains("n")) fail(path, "missing required key 'n'");
    p.n = as_integer(j.at("n"), path + ".n");
    if (p.n < 5) fail(path + ".n", "need at least 5 grid nodes");

    if (j.contains("diffusion")) {
        const json& d = j.at("diffusion");
        const std::string dpath = path + ".diffusion";
        require_object(d, dpath);
        check_keys(d, {"kind", "params"}, dpath);
        if (!d.contains("kind")) fail(dpath, "missing required key 'kind'");
        p.diffusion_kind = as_string(d.at("kind"), dpath + ".kind");
        p.diffusion_params.clear();
        if (d.contains("params")) {
            const json& dp = d.at("params");
            require_object(dp, dpath + ".params");
            for (const auto& item : dp.items())
                p.diffusion_params[item.key()] =
                    as_number_list(item.value(), dpath + ".params." + item.key());
        }
    }

    if (j.contains("flux")) {
        const json& f = j.at("flux");
        const std::string fpath = path + ".flux";
        require_object(f, fpath);
        check_keys(f, {"kind", "coefficients"}, fpath);
        if (!f.contains("kind")) fail(fpath, "missing required key 'kind'");
        p.flux_kind = as_string(f.at("kind"), fpath + ".kind");
        if (p.flux_kind == "burgers") {
            if (f.contains("coefficients"))
                fail(fpath + ".coefficients", "not accepted for the burgers flux");
        } else if (p.flux_kind == "conservation" || p.flux_kind == "reaction") {
            if (!f.contains("coefficients"))
                fail(fpath, "missing required key 'coefficients'");
            p.flux_coefficients = as_number_list(f.at("coefficients"), fpath + ".coefficients");
            if (p.flux_coefficients.size() < 3)
                fail(fpath + ".coefficients", "need a polynomial of degree >= 2");
        } else {
            fail(fpath + ".kind", "unknown flux kind '" + p.flux_kind +
                                      "' (expected burgers, conservation, or reaction)");
        }
    }

    if (j.contains("u_minus")) p.u_minus = as_number(j.at("u_minus"), path + ".u_minus");
    if (j.contains("u_plus")) p.u_plus = as_number(j.at("u_plus"), path + ".u_plus");
    return p;
}

const std::set<std::string>& allowed_keys_for(const std::string& kind) {
    static const std::map<std::string, std::set<std::string>> table{
        {"steady", {"kind", "output_dir"}},
        {"spectrum", {"kind", "output_dir", "xi", "modes"}},
        {"speedmap", {"kind", "output_dir", "xi_min", "xi_max", "xi_count", "fast"}},
        {"slow-motion", {"kind", "output_dir", "xi0", "fast"}},
        {"simulate",
         {"kind", "output_dir", "t_end", "initial", "xi0", "amplitude", "center", "width",
          "snapshot_count", "modes"}},
        {"sweep",
         {"kind", "output_dir", "inner_kind", "xi", "modes", "xi_min", "xi_max", "xi_count",
          "fast"}},
    };
    const auto it = table.find(kind);
    if (it == table.end())
        throw ConfigError("experiment.kind: unknown experiment kind '" + kind +
                          "' (expected steady, spectrum, speedmap, slow-motion, simulate, "
                          "or sweep)");
    return it->second;
}

ExperimentParams parse_experiment(const json& j, const std::string& path) {
    require_object(j, path);
    if (!j.contains("kind")) fail(path, "missing required key 'kind'");
    ExperimentParams e;
    e.kind = as_string(j.at("kind"), path + ".kind");
    check_keys(j, allowed_keys_for(e.kind), path);

    if (j.contains("output_dir")) e.output_dir = as_string(j.at("output_dir"), path + ".output_dir");
    if (j.contains("xi")) e.xi = as_number(j.at("xi"), path + ".xi");
    if (j.contains("modes")) {
        e.modes = as_integer(j.at("modes"), path + ".modes");
        if (e.modes < 1) fail(path + ".modes", "must be at least 1");
    }
    if (j.contains("xi_min")) e.xi_min = as_number(j.at("xi_min"), path + ".xi_min");
    if (j.contains("xi_max")) e.xi_max = as_number(j.at("xi_max"), path + ".xi_max");
    if (j.contains("xi_count")) {
        e.xi_count = as_integer(j.at("xi_count"), path + ".xi_count");
        if (e.xi_count < 2) fail(path + ".xi_count", "must be at least 2");
    }
    if (j.contains("fast")) e.fast = as_bool(j.at("fast"), path + ".fast");
    if (j.contains("xi0")) e.xi0 = as_number(j.at("xi0"), path + ".xi0");
    if (j.contains("t_end")) {
        e.t_end = as_number(j.at("t_end"), path + ".t_end");
        if (!(e.t_end > 0.0)) fail(path + ".t_end", "must be positive");
    }
    if (j.contains("initial")) {
        e.initial = as_string(j.at("initial"), path + ".initial");
        static const std::set<std::string> kinds{"member", "member-bump", "riemann",
                                                 "exact-steady"};
        if (kinds.find(e.initial) == kinds.end())
            fail(path + ".initial", "unknown initial data '" + e.initial +
                                        "' (expected member, member-bump, riemann, or "
                                        "exact-steady)");
    }
    if (j.contains("amplitude")) e.amplitude = as_number(j.at("amplitude"), path + ".amplitude");
    if (j.contains("center")) e.center = as_number(j.at("center"), path + ".center");
    if (j.contains("width")) {
        e.width = as_number(j.at("width"), path + ".width");
        if (!(e.width > 0.0)) fail(path + ".width", "must be positive");
    }
    if (j.contains("snapshot_count")) {
        e.snapshot_count = as_integer(j.at("snapshot_count"), path + ".snapshot_count");
        if (e.snapshot_count < 2) fail(path + ".snapshot_count", "must be at least 2");
    }
    if (j.contains("inner_kind")) {
        e.inner_kind = as_string(j.at("inner_kind"), path + ".inner_kind");
        if (e.inner_kind != "spectrum" && e.inner_kind != "speedmap")
            fail(path + ".inner_kind", "sweeps support the spectrum and speedmap kinds");
    }
    return e;
}

json serialize_problem(const ProblemConfig& p) {
    json d;
    d["kind"] = p.diffusion_kind;
    json dp = json::object();
    for (const auto& [key, values] : p.diffusion_params) dp[key] = values;
    d["params"] = dp;

    json f;
    f["kind"] = p.flux_kind;
    if (p.flux_kind != "burgers") f["coefficients"] = p.flux_coefficients;

    json out;
    out["epsilon"] = p.epsilons;
    out["ell"] = p.ell;
    out["n"] = p.n;
    out["diffusion"] = d;
    out["flux"] = f;
    out["u_minus"] = p.u_minus;
    out["u_plus"] = p.u_plus;
    return out;
}

json serialize_experiment(const ExperimentParams& e) {
    json out;
    out["kind"] = e.kind;
    out["output_dir"] = e.output_dir;
    const std::set<std::string>& allowed = allowed_keys_for(e.kind);
    auto want = [&](const char* key) { return allowed.count(key) > 0; };
    if (want("xi")) out["xi"] = e.xi;
    if (want("modes")) out["modes"] = e.modes;
    if (want("xi_min")) out["xi_min"] = e.xi_min;
    if (want("xi_max")) out["xi_max"] = e.xi_max;
    if (want("xi_count")) out["xi_count"] = e.xi_count;
    if (want("fast")) out["fast"] = e.fast;
    if (want("xi0")) out["xi0"] = e.xi0;
    if (want("t_end")) out["t_end"] = e.t_end;
    if (want("initial")) out["initial"] = e.initial;
    if (want("amplitude")) out["amplitude"] = e.amplitude;
    if (want("center")) out["center"] = e.center;
    if (want("width")) out["width"] = e.width;
    if (want("snapshot_count")) out["snapshot_count"] = e.snapshot_count;
    if (want("inner_kind")) out["inner_kind"] = e.inner_kind;
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config: JSON parse failure: ") + err.what());
    }
    require_object(root, "config");
    check_keys(root, {"problem", "experiment"}, "config");
    if (!root.contains("problem")) fail("config", "missing required key 'problem'");
    if (!root.contains("experiment")) fail("config", "missing required key 'experiment'");
    ExperimentConfig cfg;
    cfg.problem = parse_problem(root.at("problem"), "problem");
    cfg.experiment = parse_experiment(root.at("experiment"), "experiment");
    return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string ExperimentConfig::to_json_text() const {
    json root;
    root["problem"] = serialize_problem(problem);
    root["experiment"] = serialize_experiment(experiment);
    return root.dump(2) + "\n";
}

ProblemSpec ExperimentConfig::make_problem(double epsilon) const {
    Grid1D grid = Grid1D::make_uniform(problem.ell, problem.n);
    SpatialFunction a;
    try {
        a = make_spatial_function(problem.diffusion_kind, problem.diffusion_params);
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("problem.diffusion: ") + err.what());
    }
    // declared ellipticity window from grid samples (validated again at
    // problem construction)
    double lo = a(grid.x.front()), hi = lo;
    for (double x : grid.x) {
        const double v = a(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    DiffusionCoefficient diffusion{a, lo, hi};

    FluxSpec flux;
    try {
        if (problem.flux_kind == "burgers") {
            flux = FluxSpec::burgers(problem.u_minus, problem.u_plus);
        } else if (problem.flux_kind == "conservation") {
            flux = FluxSpec::conservation(Polynomial(problem.flux_coefficients), problem.u_minus,
                                          problem.u_plus);
        } else {
            flux = FluxSpec::reaction(Polynomial(problem.flux_coefficients), problem.u_minus,
                                      problem.u_plus);
        }
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("problem.flux: ") + err.what());
    } catch (const std::domain_error& err) {
        throw ConfigError(std::string("problem.flux: ") + err.what());
    }
    return ProblemSpec::make(epsilon, std::move(grid), std::move(diffusion), std::move(flux));
}

}  // namespace mfront
