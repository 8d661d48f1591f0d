#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "deblur/bench.hpp"
#include "deblur/csv.hpp"
#include "deblur/errors.hpp"
#include "deblur/image_io.hpp"
#include "deblur/kernel.hpp"
#include "deblur/metrics.hpp"
#include "deblur/noise.hpp"
#include "deblur/solvers.hpp"
#include "deblur/synthetic.hpp"
#include "deblur/verify_suite.hpp"

namespace fs = std::filesystem;
using namespace deblur;

namespace {

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("deblur");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* level = std::getenv("LOG_LEVEL");
    spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::info);
}

struct MetricFlags {
    std::string psnr_mode = "standard";
    std::string ssim_mode = "global";
    double range = 1.0;

    void attach(CLI::App* app) {
        app->add_option("--psnr-mode", psnr_mode, "standard | sse (20 log10(255^2 / SSE) on 0..255 data)")->capture_default_str();
        app->add_option("--ssim-mode", ssim_mode, "global | windowed")->capture_default_str();
        app->add_option("--range", range, "dynamic range of pixel values")->capture_default_str();
    }
    MetricsConfig build() const {
        MetricsConfig cfg;
        cfg.psnr_mode = parse_psnr_mode(psnr_mode);
        cfg.ssim_mode = parse_ssim_mode(ssim_mode);
        cfg.dynamic_range = range;
        cfg.validate();
        return cfg;
    }
};

struct DeblurArgs {
    std::string image, kernel, method = "ioptista", reg = "l1";
    double noise_var = 0.0, lambda = 1e-4, time_limit = 20.0, tol = 1e-4;
    std::uint64_t seed = 1;
    unsigned n = 12;
    std::size_t iters = 300;
    std::string out_dir = ".";
    bool fixed_clock = false;
    MetricFlags metrics;
};

int cmd_deblur(const DeblurArgs& a) {
    SolverConfig cfg;
    cfg.method = parse_method(a.method);
    cfg.reg = {parse_regularizer_kind(a.reg), a.lambda};
    cfg.weighting_n = a.n;
    cfg.max_iters = a.iters;
    cfg.max_seconds = a.time_limit;
    cfg.tol_threshold = a.tol;
    cfg.validate();
    RunOptions options;
    options.metrics = a.metrics.build();
    if (a.fixed_clock) options.clock = [] { return 0.0; };

    const Kernel kernel = parse_kernel_spec(a.kernel);
    ImageGrid truth = load_image_source(a.image);
    auto op = build_operator(kernel, truth.height(), truth.width());
    ImageGrid blurred = add_gaussian_noise(op->forward(truth), a.noise_var, a.seed);
    const Problem problem = make_problem(op, blurred, truth);

    const RunTrace trace = solve(problem, cfg, options);

    const fs::path out(a.out_dir);
    fs::create_directories(out);
    write_png(out / "blurred.png", problem.observation);
    if (!trace.diverged) write_png(out / "restored.png", trace.final_iterate);
    std::ostringstream csv;
    write_trace_csv(csv, trace.records);
    write_text_file(out / "trace.csv", csv.str());

    const auto& last = trace.records.back();
    fmt::print("method      {} (n={})\n", to_string(trace.method), trace.weighting_n);
    fmt::print("termination {} after {} iterations\n", to_string(trace.termination), trace.iterations);
    fmt::print("final Tol   {}\n", format_double(last.tol));
    fmt::print("final PSNR  {}\n", format_double(last.psnr));
    fmt::print("final SSIM  {}\n", format_double(last.ssim));
    return 0;
}

int cmd_bench(const std::string& spec_path, const std::string& out_override, unsigned threads) {
    ExperimentSpec spec = load_experiment(spec_path);
    if (!out_override.empty()) spec.output_dir = out_override;
    if (threads > 0) spec.threads = threads;
    const BenchResult result = run_bench(spec);
    write_bench_outputs(spec, result);
    fmt::print("{:<10} {:>3} {:>24} {:>12} {:>10} {:>6} {:>11}\n", "method", "n", "final Tol", "PSNR", "SSIM", "iters",
               "termination");
    for (const auto& r : result.rows) {
        const bool div = r.termination == Termination::diverged;
        fmt::print("{:<10} {:>3} {:>24} {:>12} {:>10} {:>6} {:>11}\n", r.method, r.n,
                   div ? "diverged" : format_double(r.final_tol), div ? "diverged" : fmt::format("{:.4f}", r.final_psnr),
                   div ? "diverged" : fmt::format("{:.4f}", r.final_ssim), r.iterations, to_string(r.termination));
    }
    for (const auto& note : monotonicity_report(result)) spdlog::warn("n-sweep not monotone: {}", note);
    fmt::print("wrote {}\n", (spec.output_dir / "results.csv").string());
    return 0;
}

int cmd_verify(const VerifyOptions& opts) {
    const auto checks = run_verification_suite(opts);
    fmt::print("{:<46} {:>12} {:>10}  {}\n", "check", "max dev", "tol", "result");
    for (const auto& c : checks) {
        fmt::print("{:<46} {:>12.3e} {:>10.1e}  {}\n", c.name, c.max_deviation, c.tolerance, c.passed ? "PASS" : "FAIL");
    }
    const bool ok = all_passed(checks);
    fmt::print("{}\n", ok ? "all checks passed" : "some checks FAILED");
    return ok ? 0 : 1;
}

int cmd_kernels(const std::string& spec, const std::string& out) {
    const Kernel k = parse_kernel_spec(spec);
    if (out.empty()) {
        write_kernel_text(std::cout, k);
        return 0;
    }
    std::ostringstream text;
    write_kernel_text(text, k);
    write_text_file(out, text.str());
    return 0;
}

int cmd_metrics(const std::string& a, const std::string& b, const MetricFlags& flags) {
    const MetricsConfig cfg = flags.build();
    const ImageGrid x = load_image_source(a);
    const ImageGrid y = load_image_source(b);
    fmt::print("psnr {}\n", format_double(psnr(x, y, cfg)));
    fmt::print("ssim {}\n", format_double(ssim(x, y, cfg)));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"Proximal-gradient deblurring toolkit"};
    app.require_subcommand(1);

    DeblurArgs d;
    auto* deblur = app.add_subcommand("deblur", "blur an image, restore it, write images and a trace");
    deblur->add_option("--image", d.image, "image path or synthetic:<name>:<size>[:<param>]")->required();
    deblur->add_option("--kernel", d.kernel, "disk:<r> | gaussian:<size>,<sigma> | identity")->required();
    deblur->add_option("--noise-var", d.noise_var, "Gaussian noise variance")->capture_default_str();
    deblur->add_option("--seed", d.seed, "noise seed")->capture_default_str();
    deblur->add_option("--method", d.method, "ista|iista|fista|ifista|pogm|optista|ioptista|moptista")->capture_default_str();
    deblur->add_option("--lambda", d.lambda, "regularization weight")->capture_default_str();
    deblur->add_option("--reg", d.reg, "l1 | tv | none")->capture_default_str();
    deblur->add_option("--n", d.n, "weighting order")->capture_default_str();
    deblur->add_option("--iters", d.iters, "iteration budget K")->capture_default_str();
    deblur->add_option("--time-limit", d.time_limit, "wall-clock budget in seconds")->capture_default_str();
    deblur->add_option("--tol", d.tol, "stop when Tol falls to this value")->capture_default_str();
    deblur->add_option("--out-dir", d.out_dir, "output directory")->capture_default_str();
    deblur->add_flag("--fixed-clock", d.fixed_clock, "record elapsed time as 0 (reproducible traces)");
    d.metrics.attach(deblur);

    std::string bench_spec, bench_out;
    unsigned bench_threads = 0;
    auto* bench = app.add_subcommand("bench", "run an experiment spec");
    bench->add_option("spec", bench_spec, "experiment spec file")->required();
    bench->add_option("--out-dir", bench_out, "override output_dir");
    bench->add_option("--threads", bench_threads, "override threads");

    VerifyOptions v;
    auto* verify = app.add_subcommand("verify", "run the oracle suite");
    verify->add_option("--seed", v.seed, "random seed")->capture_default_str();
    verify->add_option("--trials", v.trials, "random problems per check")->capture_default_str();
    verify->add_flag("--inject-fault", v.inject_fault, "corrupt the schedule (negative control)");

    std::string kernel_spec, kernel_out;
    auto* kernels = app.add_subcommand("kernels", "dump a kernel as text");
    kernels->add_option("spec", kernel_spec, "disk:<r> | gaussian:<size>,<sigma> | identity")->required();
    kernels->add_option("--out", kernel_out, "write to file instead of stdout");

    std::string img_a, img_b;
    MetricFlags mflags;
    auto* metrics = app.add_subcommand("metrics", "PSNR and SSIM of one image against a reference");
    metrics->add_option("image", img_a, "image")->required();
    metrics->add_option("reference", img_b, "reference image")->required();
    mflags.attach(metrics);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*deblur) return cmd_deblur(d);
        if (*bench) return cmd_bench(bench_spec, bench_out, bench_threads);
        if (*verify) return cmd_verify(v);
        if (*kernels) return cmd_kernels(kernel_spec, kernel_out);
        if (*metrics) return cmd_metrics(img_a, img_b, mflags);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 1;
}
