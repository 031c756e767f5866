#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfront/problem.hpp"

namespace mfront {

// Raised for malformed or inconsistent configuration input; the message
// always carries the JSON field path of the offending entry.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ProblemConfig {
    std::vector<double> epsilons{0.1};  // one entry, or a sweep list
    double ell = 1.0;
    int n = 1001;
    std::string diffusion_kind = "constant";
    std::map<std::string, std::vector<double>> diffusion_params{{"value", {1.0}}};
    std::string flux_kind = "burgers";      // burgers | conservation | reaction
    std::vector<double> flux_coefficients;  // polynomial coefficients, ascending
    double u_minus = 1.0;
    double u_plus = -1.0;
};

struct ExperimentParams {
    std::string kind;  // steady | spectrum | speedmap | slow-motion | simulate | sweep
    std::string output_dir = "out";
    // spectrum
    double xi = 0.2;
    int modes = 4;
    // speedmap (xi_min = xi_max = 0 picks the admissible band automatically)
    double xi_min = 0.0;
    double xi_max = 0.0;
    int xi_count = 41;
    bool fast = false;  // closed-form adjoint direction instead of eigensolves
    // slow-motion / simulate
    double xi0 = 0.3;
    // simulate
    double t_end = 100.0;
    std::string initial = "member";  // member | member-bump | riemann | exact-steady
    double amplitude = 0.1;
    double center = 0.0;
    double width = 0.15;
    int snapshot_count = 40;
    // sweep
    std::string inner_kind = "spectrum";  // spectrum | speedmap
};

// Declarative experiment description.  Parsing is strict: unknown keys and
// type mismatches are rejected with the field path; parse -> serialize ->
// parse is the identity on the parsed structure.
struct ExperimentConfig {
    ProblemConfig problem;
    ExperimentParams experiment;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load_file(const std::string& path);
    std::string to_json_text() const;

    // Instantiates the problem at one epsilon from the configured list.
    ProblemSpec make_problem(double epsilon) const;
};

}  // namespace mfront
