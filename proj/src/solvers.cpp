#include "deblur/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "deblur/errors.hpp"
#include "deblur/schedule.hpp"

namespace deblur {

Method parse_method(const std::string& name) {
    if (name == "ista") return Method::ista;
    if (name == "iista") return Method::iista;
    if (name == "fista") return Method::fista;
    if (name == "ifista") return Method::ifista;
    if (name == "pogm") return Method::pogm;
    if (name == "optista") return Method::optista;
    if (name == "ioptista") return Method::ioptista;
    if (name == "moptista") return Method::moptista;
    throw ParameterError("unknown method '" + name + "'");
}

std::string to_string(Method m) {
    switch (m) {
    case Method::ista: return "ista";
    case Method::iista: return "iista";
    case Method::fista: return "fista";
    case Method::ifista: return "ifista";
    case Method::pogm: return "pogm";
    case Method::optista: return "optista";
    case Method::ioptista: return "ioptista";
    case Method::moptista: return "moptista";
    }
    return "?";
}

bool uses_weighting(Method m) noexcept {
    return m == Method::iista || m == Method::ifista || m == Method::ioptista || m == Method::moptista;
}

std::string to_string(Termination t) {
    switch (t) {
    case Termination::tolerance: return "tolerance";
    case Termination::max_iters: return "max_iters";
    case Termination::max_time: return "max_time";
    case Termination::diverged: return "diverged";
    }
    return "?";
}

Termination parse_termination(const std::string& s) {
    if (s == "tolerance") return Termination::tolerance;
    if (s == "max_iters") return Termination::max_iters;
    if (s == "max_time") return Termination::max_time;
    if (s == "diverged") return Termination::diverged;
    throw ParameterError("unknown termination reason '" + s + "'");
}

void SolverConfig::validate() const {
    if (max_iters == 0) throw ParameterError("solver config: max_iters must be >= 1");
    if (!(tol_threshold > 0.0)) throw ParameterError("solver config: tol threshold must be positive");
    if (!(max_seconds > 0.0)) throw ParameterError("solver config: time limit must be positive");
    if (weighting_n == 0) throw ParameterError("solver config: weighting order n must be >= 1");
    if (!(reg.lambda >= 0.0) || !std::isfinite(reg.lambda)) throw ParameterError("solver config: lambda must be >= 0");
}

namespace {

// x + s (a - b), elementwise.
void add_scaled_difference(ImageGrid& x, double s, const ImageGrid& a, const ImageGrid& b) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * (a[i] - b[i]);
}

// Shared bookkeeping: records, stopping rules, optional histories.
class Run {
public:
    Run(const Problem& problem, const SolverConfig& config, const RunOptions& options, Method method)
        : problem_(problem), config_(config), options_(options) {
        config.validate();
        trace_.method = method;
        trace_.weighting_n = uses_weighting(method) ? config.weighting_n : 1u;
        weighting_ = WeightingSpec{trace_.weighting_n, 0.0};
        eta_ = 1.0 / problem.op->lipschitz();
        if (!std::isfinite(eta_)) throw ParameterError("solver: operator has zero Lipschitz constant");
        if (!options_.clock) {
            options_.clock = [] {
                using namespace std::chrono;
                return duration<double>(steady_clock::now().time_since_epoch()).count();
            };
        }
        start_ = options_.clock();
    }

    double eta() const noexcept { return eta_; }
    const Regularizer& reg() const noexcept { return config_.reg; }
    std::size_t budget() const noexcept { return config_.max_iters; }
    bool record_terms() const noexcept { return options_.record_terms; }

    ImageGrid zeros() const { return ImageGrid(problem_.op->height(), problem_.op->width(), 0.0); }

    ImageGrid weighted_gradient(const ImageGrid& x) const {
        return problem_.op->weighted_gradient(x, problem_.observation_spectrum, weighting_);
    }

    struct Evaluation {
        double tol;
        double objective;
    };

    Evaluation evaluate(const ImageGrid& x) const {
        const double tol = evaluate_tol(problem_, x);
        return {tol, tol + regularizer_value(config_.reg, x)};
    }

    // Records iterate k; returns true when the run must stop.
    bool observe(std::size_t k, const ImageGrid& iterate, const ImageGrid& auxiliary,
                 std::optional<Evaluation> known = std::nullopt) {
        const Evaluation e = known ? *known : evaluate(iterate);
        IterationRecord rec;
        rec.iter = k;
        rec.tol = e.tol;
        rec.objective = e.objective;
        if (problem_.reference && all_finite(iterate)) {
            rec.psnr = psnr(iterate, *problem_.reference, options_.metrics);
            rec.ssim = ssim(iterate, *problem_.reference, options_.metrics);
        } else {
            rec.psnr = rec.ssim = std::numeric_limits<double>::quiet_NaN();
        }
        rec.elapsed_s = options_.clock() - start_;
        if (!trace_.records.empty()) rec.elapsed_s = std::max(rec.elapsed_s, trace_.records.back().elapsed_s);
        trace_.records.push_back(rec);
        trace_.iterations = k;
        trace_.final_iterate = iterate;
        trace_.final_auxiliary = auxiliary;
        if (options_.record_iterates) {
            trace_.iterate_history.push_back(iterate);
            trace_.auxiliary_history.push_back(auxiliary);
        }

        if (k == 0) initial_tol_ = rec.tol;
        if (!std::isfinite(rec.tol) || !std::isfinite(rec.objective) ||
            (k > 0 && rec.tol > kDivergenceFactor * initial_tol_)) {
            return finish(Termination::diverged);
        }
        if (rec.tol <= config_.tol_threshold) return finish(Termination::tolerance);
        if (k >= config_.max_iters) return finish(Termination::max_iters);
        if (rec.elapsed_s >= config_.max_seconds) return finish(Termination::max_time);
        return false;
    }

    void record_terms(ImageGrid weighted_gradient, ImageGrid subgradient) {
        trace_.weighted_gradients.push_back(std::move(weighted_gradient));
        trace_.subgradients.push_back(std::move(subgradient));
    }

    // A non-finite value reached the prox in iteration k.
    void abort_numeric(std::size_t k) {
        trace_.iterations = k;
        finish(Termination::diverged);
    }

    RunTrace take() { return std::move(trace_); }

private:
    bool finish(Termination t) {
        trace_.termination = t;
        trace_.diverged = t == Termination::diverged;
        return true;
    }

    const Problem& problem_;
    const SolverConfig& config_;
    RunOptions options_;
    RunTrace trace_;
    WeightingSpec weighting_;
    double eta_ = 0.0;
    double start_ = 0.0;
    double initial_tol_ = 0.0;
};

// x_{k+1} = prox_{eta h}(x_k - eta W_n grad f(x_k))
RunTrace proximal_gradient(const Problem& problem, const SolverConfig& config, const RunOptions& options, Method method) {
    Run run(problem, config, options, method);
    const double eta = run.eta();
    ImageGrid x = run.zeros();
    if (run.observe(0, x, x)) return run.take();
    for (std::size_t k = 0; k < run.budget(); ++k) {
        ImageGrid v = x;
        const ImageGrid g = run.weighted_gradient(x);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= eta * g[i];
        try {
            x = prox(run.reg(), eta, v);
        } catch (const NumericError&) {
            run.abort_numeric(k + 1);
            break;
        }
        if (run.observe(k + 1, x, x)) break;
    }
    return run.take();
}

// Beck-Teboulle FISTA with alpha_1 = 1 and x_0 = x_{-1} = y_1 = 0:
//   x_k     = prox_{eta h}(y_k - eta W_n grad f(y_k))
//   y_{k+1} = x_k + ((alpha_k - 1) / alpha_{k+1}) (x_k - x_{k-1})
RunTrace accelerated(const Problem& problem, const SolverConfig& config, const RunOptions& options, Method method) {
    Run run(problem, config, options, method);
    const double eta = run.eta();
    ImageGrid x_prev = run.zeros();
    ImageGrid y = x_prev;
    double a = 1.0;
    if (run.observe(0, x_prev, y)) return run.take();
    for (std::size_t k = 0; k < run.budget(); ++k) {
        ImageGrid v = y;
        const ImageGrid g = run.weighted_gradient(y);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= eta * g[i];
        ImageGrid x;
        try {
            x = prox(run.reg(), eta, v);
        } catch (const NumericError&) {
            run.abort_numeric(k + 1);
            break;
        }
        const double a_next = (1.0 + std::sqrt(1.0 + 4.0 * a * a)) / 2.0;
        y = x;
        add_scaled_difference(y, (a - 1.0) / a_next, x, x_prev);
        x_prev = std::move(x);
        a = a_next;
        if (run.observe(k + 1, x_prev, y)) break;
    }
    return run.take();
}

// y_{k+1} = prox_{eta h}(x_k - eta grad f(x_k))
// x_{k+1} = y_{k+1} + ((a_k - 1)/a_{k+1})(y_{k+1} - y_k) + (a_k/a_{k+1})(y_{k+1} - x_k)
RunTrace proximal_ogm(const Problem& problem, const SolverConfig& config, const RunOptions& options) {
    Run run(problem, config, options, Method::pogm);
    const double eta = run.eta();
    ImageGrid x = run.zeros();
    ImageGrid y = x;
    double a = 1.0;
    if (run.observe(0, y, x)) return run.take();
    for (std::size_t k = 0; k < run.budget(); ++k) {
        ImageGrid v = x;
        const ImageGrid g = run.weighted_gradient(x);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= eta * g[i];
        ImageGrid y_next;
        try {
            y_next = prox(run.reg(), eta, v);
        } catch (const NumericError&) {
            run.abort_numeric(k + 1);
            break;
        }
        const double a_next = (1.0 + std::sqrt(1.0 + 4.0 * a * a)) / 2.0;
        const double momentum = (a - 1.0) / a_next;
        const double correction = a / a_next;
        ImageGrid x_next = y_next;
        for (std::size_t i = 0; i < x_next.size(); ++i) {
            x_next[i] += momentum * (y_next[i] - y[i]) + correction * (y_next[i] - x[i]);
        }
        x = std::move(x_next);
        y = std::move(y_next);
        a = a_next;
        if (run.observe(k + 1, y, x)) break;
    }
    return run.take();
}

// OptISTA with a weighted gradient; `monotone` adds the objective
// acceptance test on the x-update.
//   y_{k+1} = prox_{g_k eta h}(y_k - g_k eta W_n grad f(x_k))
//   z_{k+1} = x_k + (y_{k+1} - y_k) / g_k
//   x_{k+1} = z_{k+1} + ((a_k - 1)/a_{k+1})(z_{k+1} - z_k) + (a_k/a_{k+1})(z_{k+1} - x_k)
RunTrace optimal_ista(const Problem& problem, const SolverConfig& config, const RunOptions& options, Method method,
                      bool monotone) {
    Run run(problem, config, options, method);
    const Schedule schedule = build_schedule(config.max_iters);
    const double eta = run.eta();
    ImageGrid x = run.zeros();
    ImageGrid y = x;
    ImageGrid z = x;
    auto current = run.evaluate(x);
    if (run.observe(0, x, y, current)) return run.take();
    for (std::size_t k = 0; k < run.budget(); ++k) {
        const double gamma = schedule.gamma[k];
        const double step = gamma * eta;
        const double momentum = (schedule.alpha[k] - 1.0) / schedule.alpha[k + 1];
        const double correction = schedule.alpha[k] / schedule.alpha[k + 1];

        ImageGrid g = run.weighted_gradient(x);
        ImageGrid v = y;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= step * g[i];
        ImageGrid y_next;
        try {
            y_next = prox(run.reg(), step, v);
        } catch (const NumericError&) {
            run.abort_numeric(k + 1);
            break;
        }
        if (run.record_terms()) run.record_terms(std::move(g), subgradient_residual(run.reg(), step, v, y_next));

        ImageGrid z_next = x;
        for (std::size_t i = 0; i < z_next.size(); ++i) z_next[i] += (y_next[i] - y[i]) / gamma;
        ImageGrid x_next = z_next;
        for (std::size_t i = 0; i < x_next.size(); ++i) {
            x_next[i] += momentum * (z_next[i] - z[i]) + correction * (z_next[i] - x[i]);
        }

        const auto candidate = run.evaluate(x_next);
        if (!monotone || candidate.objective < current.objective) {
            x = std::move(x_next);
            current = candidate;
        }
        y = std::move(y_next);
        z = std::move(z_next);
        if (run.observe(k + 1, x, y, current)) break;
    }
    return run.take();
}

} // namespace

RunTrace run_ista(const Problem& p, const SolverConfig& c, const RunOptions& o) {
    return proximal_gradient(p, c, o, Method::ista);
}
RunTrace run_iista(const Problem& p, const SolverConfig& c, const RunOptions& o) {
    return proximal_gradient(p, c, o, Method::iista);
}
RunTrace run_fista(const Problem& p, const SolverConfig& c, const RunOptions& o) {
    return accelerated(p, c, o, Method::fista);
}
RunTrace run_ifista(const Problem& p, const SolverConfig& c, const RunOptions& o) {
    return accelerated(p, c, o, Method::ifista);
}
RunTrace run_pogm(const Problem& p, const SolverConfig& c, const RunOptions& o) { return proximal_ogm(p, c, o); }
RunTrace run_optista(const Problem& p, const SolverConfig& c, const RunOptions& o) {
    return optimal_ista(p, c, o, Method::optista, false);
}
RunTrace run_ioptista(const Problem& p, const SolverConfig& c, const RunOptions& o) {
    return optimal_ista(p, c, o, Method::ioptista, false);
}
RunTrace run_moptista(const Problem& p, const SolverConfig& c, const RunOptions& o) {
    return optimal_ista(p, c, o, Method::moptista, true);
}

RunTrace solve(const Problem& p, const SolverConfig& c, const RunOptions& o) {
    switch (c.method) {
    case Method::ista: return run_ista(p, c, o);
    case Method::iista: return run_iista(p, c, o);
    case Method::fista: return run_fista(p, c, o);
    case Method::ifista: return run_ifista(p, c, o);
    case Method::pogm: return run_pogm(p, c, o);
    case Method::optista: return run_optista(p, c, o);
    case Method::ioptista: return run_ioptista(p, c, o);
    case Method::moptista: return run_moptista(p, c, o);
    }
    throw ParameterError("unknown method");
}

} // namespace deblur
