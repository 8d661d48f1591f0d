#pragma once

#include <string>
#include <vector>

#include "deblur/csv.hpp"
#include "deblur/experiment.hpp"
#include "deblur/solvers.hpp"

namespace deblur {

struct BenchCell {
    SolverConfig config;
    RunTrace trace;
    double wall_seconds = 0.0;
};

struct BenchResult {
    Problem problem;
    std::vector<BenchCell> cells;  // in spec order
    std::vector<ResultRow> rows;   // one per cell
};

/// Runs every solver of the spec on one shared observation. Cells run on
/// spec.threads workers; results come back in spec order regardless.
BenchResult run_bench(const ExperimentSpec& spec);

/// "<method>_n<n>" plus a numeric suffix when the pair repeats.
std::vector<std::string> cell_labels(const std::vector<BenchCell>& cells);

/// Writes results.csv, observation.png, one traces/<label>.csv and one
/// restored/<label>.png per cell. Called from a single thread.
void write_bench_outputs(const ExperimentSpec& spec, const BenchResult& result);

/// Soft check of "more weighting helps": for every (method, reg, lambda)
/// group with several n values, reports each place where final Tol
/// increases with n before the first diverged cell. Empty means monotone.
std::vector<std::string> monotonicity_report(const BenchResult& result);

} // namespace deblur
