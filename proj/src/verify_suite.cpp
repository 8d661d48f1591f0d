#include "deblur/verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "deblur/solvers.hpp"
#include "deblur/verification.hpp"

namespace deblur {

namespace {

using namespace verification;

constexpr double kIdentityLambda = 1e-2;

SolverConfig exact_budget(Method method, RegularizerKind kind, std::size_t K, unsigned n = 1) {
    SolverConfig cfg;
    cfg.method = method;
    cfg.reg = {kind, kind == RegularizerKind::none ? 0.0 : kIdentityLambda};
    cfg.weighting_n = n;
    cfg.max_iters = K;
    cfg.max_seconds = std::numeric_limits<double>::infinity();
    cfg.tol_threshold = std::numeric_limits<double>::min();
    return cfg;
}

RunOptions fixed_clock(bool iterates, bool terms = false) {
    RunOptions opts;
    opts.record_iterates = iterates;
    opts.record_terms = terms;
    opts.clock = [] { return 0.0; };
    return opts;
}

double history_gap(const std::vector<ImageGrid>& a, const std::vector<ImageGrid>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, relative_inf_error(a[i], b[i]));
    return worst;
}

OracleCheck verdict(std::string name, double deviation, double tolerance) {
    return {std::move(name), deviation, tolerance, deviation <= tolerance};
}

OracleCheck check_gamma(bool inject_fault) {
    double worst = 0.0;
    for (std::size_t K = 1; K <= 300; ++K) {
        Schedule schedule = build_schedule(K);
        const auto table = build_coefficients(schedule);
        if (inject_fault) schedule.gamma[0] += 1e-3;
        worst = std::max(worst, check_gamma_equals_tK(schedule, table));
    }
    return verdict("gamma = t_K, K = 1..300", worst, 1e-8);
}

std::vector<OracleCheck> check_coefficient_forms() {
    double s_gap = 0.0, telescoping = 0.0;
    for (std::size_t K = 1; K <= 100; ++K) {
        const Schedule schedule = build_schedule(K);
        const auto table = build_coefficients(schedule);
        s_gap = std::max(s_gap, max_table_difference(table.s, s_by_recursion(schedule)));
        telescoping = std::max(telescoping, telescoping_error(table));
    }
    return {verdict("s recursion vs t differences, K <= 100", s_gap, 1e-12),
            verdict("t telescoping sum of s, K <= 100", telescoping, 1e-12)};
}

OracleCheck check_final_iterates(std::uint64_t seed, std::size_t trials) {
    double worst = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const Problem problem = make_random_problem(16, 16, 3 + 2 * (trial % 2), seed + trial);
        for (auto kind : {RegularizerKind::l1, RegularizerKind::tv1d}) {
            for (std::size_t K : {1u, 5u, 30u}) {
                const auto trace = run_ioptista(problem, exact_budget(Method::ioptista, kind, K, 12), fixed_clock(false));
                if (trace.iterations != K) return verdict("x_K = y_K (IOptISTA)", std::numeric_limits<double>::infinity(), 1e-9);
                worst = std::max(worst, relative_inf_error(trace.final_auxiliary, trace.final_iterate));
            }
        }
    }
    return verdict("x_K = y_K (IOptISTA)", worst, 1e-9);
}

OracleCheck check_closed_form(std::uint64_t seed, std::size_t problems) {
    constexpr std::size_t K = 10;
    const Schedule schedule = build_schedule(K);
    const auto table = build_coefficients(schedule);
    double worst = 0.0;
    for (std::size_t trial = 0; trial < problems; ++trial) {
        const Problem problem = make_random_problem(8, 8, 3, seed + 1000 + trial);
        const double eta = 1.0 / problem.op->lipschitz();
        for (auto kind : {RegularizerKind::l1, RegularizerKind::tv1d}) {
            const auto trace =
                run_ioptista(problem, exact_budget(Method::ioptista, kind, K, 4), fixed_clock(true, true));
            const ImageGrid& x0 = trace.iterate_history.front();
            for (std::size_t i = 1; i <= trace.iterations; ++i) {
                const auto rec =
                    reconstruct_iterates(x0, trace.weighted_gradients, trace.subgradients, schedule, table, eta, i);
                worst = std::max(worst, relative_inf_error(rec.x, trace.iterate_history[i]));
                worst = std::max(worst, relative_inf_error(rec.y, trace.auxiliary_history[i]));
            }
        }
    }
    return verdict("closed-form x_i, y_i, i <= 10", worst, 1e-8);
}

std::vector<OracleCheck> check_weighting(std::uint64_t seed, std::size_t operators) {
    double horner = 0.0, spectral = 0.0;
    for (std::size_t trial = 0; trial < operators; ++trial) {
        const Problem problem = make_random_problem(16, 16, 3 + 2 * (trial % 3), seed + 2000 + trial);
        for (unsigned n : {1u, 2u, 4u, 8u, 14u}) {
            const WeightingSpec spec{n, 0.0};
            const Eigen::MatrixXd dense = dense_weighting(*problem.op, spec);
            const double scale = dense.cwiseAbs().maxCoeff();
            const auto gap = [&](WeightingPath path) {
                return (probe_weighting(*problem.op, spec, path) - dense).cwiseAbs().maxCoeff() / scale;
            };
            horner = std::max(horner, gap(WeightingPath::horner));
            spectral = std::max(spectral, gap(WeightingPath::spectral));
        }
    }
    return {verdict("W_n Horner vs dense binomial", horner, 1e-10),
            verdict("W_n spectral vs dense binomial", spectral, 1e-10)};
}

std::vector<OracleCheck> check_operator(std::uint64_t seed, std::size_t trials) {
    std::mt19937_64 rng(seed + 3000);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double adjoint_gap = 0.0, conv_gap = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::size_t h = 5 + trial % 7, w = 4 + (3 * trial) % 9;
        const Problem problem = make_random_problem(h, w, 1 + 2 * (trial % 3), seed + 3000 + trial);
        const BlurOperator& op = *problem.op;
        ImageGrid x(h, w), y(h, w);
        for (auto& v : x.values()) v = unit(rng);
        for (auto& v : y.values()) v = unit(rng);
        const double lhs = dot(op.forward(x), y);
        const double rhs = dot(x, op.adjoint(y));
        adjoint_gap = std::max(adjoint_gap, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));

        // Direct circular convolution with the anchored kernel.
        const Kernel& k = op.kernel();
        ImageGrid direct(h, w, 0.0);
        for (std::size_t r = 0; r < h; ++r) {
            for (std::size_t c = 0; c < w; ++c) {
                double acc = 0.0;
                for (std::size_t i = 0; i < k.size_y; ++i) {
                    for (std::size_t j = 0; j < k.size_x; ++j) {
                        const auto sr = (r + h * k.size_y + k.anchor_y - i) % h;
                        const auto sc = (c + w * k.size_x + k.anchor_x - j) % w;
                        acc += k(i, j) * x(sr, sc);
                    }
                }
                direct(r, c) = acc;
            }
        }
        conv_gap = std::max(conv_gap, relative_inf_error(op.forward(x), direct));
    }
    return {verdict("adjoint identity <Ax,y> = <x,A^T y>", adjoint_gap, 1e-12),
            verdict("FFT forward vs direct circular convolution", conv_gap, 1e-12)};
}

std::vector<OracleCheck> check_prox(std::uint64_t seed, std::size_t signals) {
    std::mt19937_64 rng(seed + 4000);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> length(1, 6);
    std::uniform_real_distribution<double> lam(0.01, 0.5);
    double soft_gap = 0.0, l1_gap = 0.0, tv_gap = 0.0, mean_gap = 0.0;
    for (std::size_t s = 0; s < signals; ++s) {
        const std::size_t n = length(rng);
        ImageGrid v(1, n);
        for (auto& e : v.values()) e = unit(rng);
        const double step = 0.5 + 0.5 * (unit(rng) + 1.0);
        const double lambda = lam(rng);

        const Regularizer l1{RegularizerKind::l1, lambda};
        const ImageGrid y1 = prox(l1, step, v);
        const double tau = step * lambda;
        for (std::size_t i = 0; i < n; ++i) {
            const double expected = std::copysign(std::max(std::abs(v[i]) - tau, 0.0), v[i]);
            if (y1[i] != expected) soft_gap = std::max(soft_gap, std::abs(y1[i] - expected) + 1e-300);
        }
        const auto brute_l1 = brute_force_prox(l1, step, v.values());
        for (std::size_t i = 0; i < n; ++i) l1_gap = std::max(l1_gap, std::abs(y1[i] - brute_l1[i]));

        const Regularizer tv{RegularizerKind::tv1d, lambda};
        const ImageGrid yt = prox(tv, step, v);
        const auto brute_tv = brute_force_prox(tv, step, v.values());
        for (std::size_t i = 0; i < n; ++i) tv_gap = std::max(tv_gap, std::abs(yt[i] - brute_tv[i]));
        mean_gap = std::max(mean_gap, std::abs(sum(yt) - sum(v)) / static_cast<double>(n));
    }
    return {verdict("soft threshold vs closed form (exact)", soft_gap, 0.0),
            // Comparing objective values pins the minimizer only to ~sqrt(eps).
            verdict("l1 prox vs grid search", l1_gap, 1e-7),
            verdict("TV prox vs dual projected gradient", tv_gap, 1e-6),
            verdict("TV prox preserves row mean", mean_gap, 1e-12)};
}

std::vector<OracleCheck> check_reductions(std::uint64_t seed, std::size_t trials) {
    constexpr std::size_t K = 50;
    double opt = 0.0, ogm = 0.0, fista = 0.0, ista = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const Problem problem = make_random_problem(16, 16, 5, seed + 5000 + trial);
        const auto kind = trial % 2 == 0 ? RegularizerKind::l1 : RegularizerKind::tv1d;
        const auto opts = fixed_clock(true);
        const auto pair_gap = [&](Method weighted, Method plain) {
            const auto a = solve(problem, exact_budget(weighted, kind, K, 1), opts);
            const auto b = solve(problem, exact_budget(plain, kind, K, 1), opts);
            return std::max(history_gap(a.iterate_history, b.iterate_history),
                            history_gap(a.auxiliary_history, b.auxiliary_history));
        };
        opt = std::max(opt, pair_gap(Method::ioptista, Method::optista));
        fista = std::max(fista, pair_gap(Method::ifista, Method::fista));
        ista = std::max(ista, pair_gap(Method::iista, Method::ista));
        const auto smooth = run_optista(problem, exact_budget(Method::optista, RegularizerKind::none, K), opts);
        ogm = std::max(ogm, history_gap(smooth.iterate_history, ogm_reference(problem, K)));
    }
    return {verdict("IOptISTA(n=1) = OptISTA", opt, 1e-12), verdict("OptISTA(h=0) = OGM recursion", ogm, 1e-12),
            verdict("IFISTA(n=1) = FISTA", fista, 1e-12), verdict("IISTA(n=1) = ISTA", ista, 1e-12)};
}

} // namespace

std::vector<OracleCheck> run_verification_suite(const VerifyOptions& options) {
    const std::size_t trials = std::max<std::size_t>(options.trials, 1);
    std::vector<OracleCheck> out;
    const auto append = [&](std::vector<OracleCheck> more) {
        for (auto& c : more) out.push_back(std::move(c));
    };
    out.push_back(check_gamma(options.inject_fault));
    append(check_coefficient_forms());
    out.push_back(check_final_iterates(options.seed, trials));
    out.push_back(check_closed_form(options.seed, (trials + 1) / 2));
    append(check_weighting(options.seed, std::min<std::size_t>(trials, 4)));
    append(check_operator(options.seed, trials));
    append(check_prox(options.seed, 25 * trials));
    append(check_reductions(options.seed, std::min<std::size_t>(trials, 6)));
    return out;
}

bool all_passed(const std::vector<OracleCheck>& checks) noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
}

} // namespace deblur
