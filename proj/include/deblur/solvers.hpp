#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "deblur/image.hpp"
#include "deblur/metrics.hpp"
#include "deblur/problem.hpp"
#include "deblur/prox.hpp"

namespace deblur {

enum class Method { ista, iista, fista, ifista, pogm, optista, ioptista, moptista };

Method parse_method(const std::string& name);
std::string to_string(Method m);
/// True for the methods that apply W_n to the gradient.
bool uses_weighting(Method m) noexcept;

/// Step size is always the constant 1/L of the operator.
struct SolverConfig {
    Method method = Method::ioptista;
    Regularizer reg{RegularizerKind::l1, 1e-4};
    unsigned weighting_n = 12;
    std::size_t max_iters = 300;
    double max_seconds = 20.0;
    double tol_threshold = 1e-4;

    /// weighting_n for weighted methods, 1 otherwise.
    unsigned effective_n() const noexcept { return uses_weighting(method) ? weighting_n : 1u; }
    void validate() const;
};

enum class Termination { tolerance, max_iters, max_time, diverged };

std::string to_string(Termination t);
Termination parse_termination(const std::string& s);

struct IterationRecord {
    std::size_t iter = 0;
    double tol = 0.0;
    double objective = 0.0;
    double psnr = 0.0;  // NaN without a reference image
    double ssim = 0.0;  // NaN without a reference image
    double elapsed_s = 0.0;
};

/// Everything a run produces. `iterate` is the sequence the method reports
/// (x for most methods, the prox output y for POGM); `auxiliary` is the
/// companion sequence (y for FISTA and the OptISTA family, x for POGM, x
/// itself for ISTA).
struct RunTrace {
    Method method = Method::ista;
    unsigned weighting_n = 1;
    std::vector<IterationRecord> records;
    ImageGrid final_iterate;
    ImageGrid final_auxiliary;
    std::size_t iterations = 0;
    Termination termination = Termination::max_iters;
    bool diverged = false;

    // Filled when RunOptions::record_iterates is set: entries 0..iterations.
    std::vector<ImageGrid> iterate_history;
    std::vector<ImageGrid> auxiliary_history;

    // Filled for the OptISTA family when RunOptions::record_terms is set:
    // W_n grad f(x_j) and h'(y_{j+1}) for j = 0..iterations-1.
    std::vector<ImageGrid> weighted_gradients;
    std::vector<ImageGrid> subgradients;

    double final_tol() const { return records.empty() ? 0.0 : records.back().tol; }
};

struct RunOptions {
    bool record_iterates = false;
    bool record_terms = false;
    MetricsConfig metrics{};
    /// Seconds since an arbitrary origin. Defaults to a steady clock; a
    /// constant clock makes traces byte-reproducible.
    std::function<double()> clock;
};

/// Tol above this multiple of its initial value (or non-finite) marks a run
/// as diverged.
inline constexpr double kDivergenceFactor = 1e6;

RunTrace run_ista(const Problem& problem, const SolverConfig& config, const RunOptions& options = {});
RunTrace run_iista(const Problem& problem, const SolverConfig& config, const RunOptions& options = {});
RunTrace run_fista(const Problem& problem, const SolverConfig& config, const RunOptions& options = {});
RunTrace run_ifista(const Problem& problem, const SolverConfig& config, const RunOptions& options = {});
RunTrace run_pogm(const Problem& problem, const SolverConfig& config, const RunOptions& options = {});
RunTrace run_optista(const Problem& problem, const SolverConfig& config, const RunOptions& options = {});
RunTrace run_ioptista(const Problem& problem, const SolverConfig& config, const RunOptions& options = {});
RunTrace run_moptista(const Problem& problem, const SolverConfig& config, const RunOptions& options = {});

/// Dispatches on config.method.
RunTrace solve(const Problem& problem, const SolverConfig& config, const RunOptions& options = {});

} // namespace deblur
