#include "deblur/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "deblur/image_io.hpp"

namespace deblur {

namespace {

ResultRow make_row(const ExperimentSpec& spec, const BenchCell& cell) {
    const auto& t = cell.trace;
    ResultRow row;
    row.image = spec.image;
    row.kernel = spec.kernel;
    row.noise_variance = spec.noise_variance;
    row.method = to_string(cell.config.method);
    row.n = t.weighting_n;
    row.iterations = t.iterations;
    row.wall_seconds = cell.wall_seconds;
    row.termination = t.termination;
    if (t.diverged || t.records.empty()) {
        row.final_tol = row.final_psnr = row.final_ssim = std::nan("");
    } else {
        row.final_tol = t.records.back().tol;
        row.final_psnr = t.records.back().psnr;
        row.final_ssim = t.records.back().ssim;
    }
    return row;
}

BenchCell run_cell(const Problem& problem, const SolverConfig& config, const RunOptions& options, bool fixed_clock) {
    const auto start = std::chrono::steady_clock::now();
    BenchCell cell{config, solve(problem, config, options), 0.0};
    if (!fixed_clock) cell.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    spdlog::info("{} n={} -> {} after {} iterations", to_string(config.method), cell.trace.weighting_n,
                 to_string(cell.trace.termination), cell.trace.iterations);
    return cell;
}

} // namespace

BenchResult run_bench(const ExperimentSpec& spec) {
    spec.validate();
    BenchResult result{assemble_problem(spec), {}, {}};
    RunOptions options;
    options.metrics = spec.metrics;
    if (spec.fixed_clock) options.clock = [] { return 0.0; };

    const std::size_t count = spec.solvers.size();
    std::vector<BenchCell> cells(count);
    const unsigned workers = std::min<unsigned>(spec.threads, static_cast<unsigned>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) cells[i] = run_cell(result.problem, spec.solvers[i], options, spec.fixed_clock);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> failures(count);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < count; i = next++) {
                        try {
                            cells[i] = run_cell(result.problem, spec.solvers[i], options, spec.fixed_clock);
                        } catch (...) {
                            failures[i] = std::current_exception();
                        }
                    }
                });
            }
        }
        for (auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }
    }
    for (const auto& cell : cells) result.rows.push_back(make_row(spec, cell));
    result.cells = std::move(cells);
    return result;
}

std::vector<std::string> cell_labels(const std::vector<BenchCell>& cells) {
    std::vector<std::string> labels;
    std::map<std::string, int> seen;
    for (const auto& cell : cells) {
        std::string label = fmt::format("{}_n{}", to_string(cell.config.method), cell.trace.weighting_n);
        const int count = seen[label]++;
        if (count > 0) label += fmt::format("_{}", count + 1);
        labels.push_back(std::move(label));
    }
    return labels;
}

void write_bench_outputs(const ExperimentSpec& spec, const BenchResult& result) {
    const auto& dir = spec.output_dir;
    std::filesystem::create_directories(dir / "traces");
    std::filesystem::create_directories(dir / "restored");
    std::ostringstream table;
    write_results_csv(table, result.rows);
    write_text_file(dir / "results.csv", table.str());
    write_png(dir / "observation.png", result.problem.observation);
    const auto labels = cell_labels(result.cells);
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        std::ostringstream trace;
        write_trace_csv(trace, result.cells[i].trace.records);
        write_text_file(dir / "traces" / (labels[i] + ".csv"), trace.str());
        if (!result.cells[i].trace.diverged) write_png(dir / "restored" / (labels[i] + ".png"), result.cells[i].trace.final_iterate);
    }
}

std::vector<std::string> monotonicity_report(const BenchResult& result) {
    struct Entry {
        unsigned n;
        const ResultRow* row;
    };
    std::map<std::string, std::vector<Entry>> groups;
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const auto& cfg = result.cells[i].config;
        if (!uses_weighting(cfg.method)) continue;
        const auto key = fmt::format("{} {} lambda={}", to_string(cfg.method), to_string(cfg.reg.kind), cfg.reg.lambda);
        groups[key].push_back({result.rows[i].n, &result.rows[i]});
    }
    std::vector<std::string> notes;
    for (auto& [key, entries] : groups) {
        std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.n < b.n; });
        for (std::size_t i = 1; i < entries.size(); ++i) {
            const auto* prev = entries[i - 1].row;
            const auto* cur = entries[i].row;
            if (cur->termination == Termination::diverged || prev->termination == Termination::diverged) break;
            if (cur->final_tol > prev->final_tol) {
                notes.push_back(fmt::format("{}: Tol rises from {:.6g} (n={}) to {:.6g} (n={})", key, prev->final_tol,
                                            prev->n, cur->final_tol, cur->n));
            }
        }
    }
    return notes;
}

} // namespace deblur
