#pragma once

#include <string>

#include "mfront/config.hpp"

namespace mfront {

// Log verbosity, selected by the MFRONT_LOG environment variable
// (quiet | info | debug; default info).  Messages go to stderr so CSV
// pipelines on stdout stay clean.
enum class LogLevel { quiet = 0, info = 1, debug = 2 };
LogLevel log_level();
void log_line(LogLevel at, const std::string& msg);

// Dispatches to the configured experiment kind and writes its artifacts
// under out_dir (created if needed; empty string uses the config's
// output_dir).  jobs bounds the sweep worker pool (<= 0 picks the
// hardware concurrency).  On an abnormal exit every artifact already
// written by the failing run is renamed with a "_partial" suffix before
// the exception propagates.
void run_experiment_config(const ExperimentConfig& cfg, const std::string& out_dir, int jobs);

// Canned reproductions: eigen-scaling, residual-map, slow-motion,
// pde-vs-reduced.  Each writes the CSV its acceptance check consumes
// plus a JSON summary.
void run_preset(const std::string& name, const std::string& out_dir, int jobs);

}  // namespace mfront
