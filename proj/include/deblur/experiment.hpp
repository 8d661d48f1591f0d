#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "deblur/metrics.hpp"
#include "deblur/problem.hpp"
#include "deblur/solvers.hpp"

namespace deblur {

/// One benchmark experiment: a single degraded observation shared by every
/// solver configuration.
///
/// Text format, one `key = value` per line, `#` starts a comment. Global
/// keys come first; each `[solver]` header opens a new solver section.
///
///   image          synthetic spec or image path   (required)
///   kernel         disk:<r> | gaussian:<size>,<sigma> | identity   (required)
///   noise_var      Gaussian noise variance        (default 0)
///   seed           noise seed                     (default 1)
///   output_dir     directory for CSVs and images  (default bench_out)
///   psnr_mode      standard | sse                 (default standard)
///   ssim_mode      global | windowed              (default global)
///   dynamic_range  pixel range for the metrics    (default 1)
///   threads        concurrent cells               (default 1)
///   fixed_clock    true: elapsed times recorded as 0, time limits inert
///
///   [solver]
///   method         ista | iista | fista | ifista | pogm | optista | ioptista | moptista
///   n              weighting order, or a comma list (one cell per value)
///   reg            l1 | tv | none                 (default l1)
///   lambda         (default 1e-4)
///   iters          (default 300)
///   time_limit     seconds (default 20)
///   tol            (default 1e-4)
struct ExperimentSpec {
    std::string image;
    std::string kernel;
    double noise_variance = 0.0;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "bench_out";
    MetricsConfig metrics{};
    unsigned threads = 1;
    bool fixed_clock = false;
    std::vector<SolverConfig> solvers;

    /// Every problem found, one message each; empty when valid.
    std::vector<std::string> validation_errors() const;
    /// Throws ParameterError listing all validation errors.
    void validate() const;
};

/// Parses the text format. Syntax errors and validation errors are all
/// collected and reported together in one ParameterError.
ExperimentSpec parse_experiment(std::istream& in);
ExperimentSpec load_experiment(const std::filesystem::path& path);

/// Ground truth, kernel and noisy observation for the experiment. The noise
/// is drawn once from `seed`.
Problem assemble_problem(const ExperimentSpec& spec);

} // namespace deblur
