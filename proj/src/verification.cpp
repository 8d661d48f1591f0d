#include "deblur/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "deblur/errors.hpp"
#include "deblur/noise.hpp"

namespace deblur::verification {

CoefficientTable build_coefficients(const Schedule& schedule) {
    const std::size_t K = schedule.K;
    const auto& a = schedule.alpha;
    CoefficientTable table;
    table.K = K;
    table.t.resize(K + 1);
    table.s.resize(K + 1);
    for (std::size_t i = 1; i <= K; ++i) {
        table.t[i].resize(i);
        table.s[i].resize(i);
    }
    // Row i+1 from rows 1..i.
    for (std::size_t i = 0; i < K; ++i) {
        table.t[i + 1][i] = 1.0 + (2.0 * a[i] - 1.0) / a[i + 1];
        for (std::size_t j = 0; j < i; ++j) {
            double acc = 0.0;
            for (std::size_t k = j + 1; k <= i; ++k) acc += 2.0 * a[j] / a[k + 1] - table.t[k][j] / a[k + 1];
            table.t[i + 1][j] = table.t[j + 1][j] + acc;
        }
    }
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < i; ++j) table.s[i + 1][j] = table.t[i + 1][j] - table.t[i][j];
        table.s[i + 1][i] = table.t[i + 1][i];
    }
    return table;
}

std::vector<std::vector<double>> s_by_recursion(const Schedule& schedule) {
    const std::size_t K = schedule.K;
    const auto& a = schedule.alpha;
    std::vector<std::vector<double>> s(K + 1);
    for (std::size_t i = 1; i <= K; ++i) s[i].resize(i);
    for (std::size_t i = 0; i < K; ++i) {
        const double ratio = (a[i] - 1.0) / a[i + 1];
        for (std::size_t j = 0; j + 1 < i; ++j) s[i + 1][j] = ratio * s[i][j];
        if (i >= 1) s[i + 1][i - 1] = ratio * (s[i][i - 1] - 1.0);
        s[i + 1][i] = 1.0 + (2.0 * a[i] - 1.0) / a[i + 1];
    }
    return s;
}

double max_table_difference(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    if (a.size() != b.size()) throw ParameterError("max_table_difference: table sizes differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) throw ParameterError("max_table_difference: row sizes differ");
        for (std::size_t j = 0; j < a[i].size(); ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
    }
    return worst;
}

double telescoping_error(const CoefficientTable& table) {
    double worst = 0.0;
    for (std::size_t i = 1; i <= table.K; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double acc = 0.0;
            for (std::size_t k = j + 1; k <= i; ++k) acc += table.s[k][j];
            worst = std::max(worst, std::abs(table.t[i][j] - acc));
        }
    }
    return worst;
}

double check_gamma_equals_tK(const Schedule& schedule, const CoefficientTable& table) {
    if (table.K != schedule.K) throw ParameterError("check_gamma_equals_tK: table and schedule disagree on K");
    double worst = 0.0;
    for (std::size_t j = 0; j < schedule.K; ++j) {
        worst = std::max(worst, std::abs(schedule.gamma[j] - table.t[schedule.K][j]));
    }
    return worst;
}

ReconstructedIterate reconstruct_iterates(const ImageGrid& x0, std::span<const ImageGrid> weighted_gradients,
                                          std::span<const ImageGrid> subgradients, const Schedule& schedule,
                                          const CoefficientTable& table, double eta, std::size_t i) {
    if (i == 0 || i > schedule.K || i > table.K) throw ParameterError("reconstruct_iterates: index out of range");
    if (weighted_gradients.size() < i || subgradients.size() < i) {
        throw ParameterError("reconstruct_iterates: fewer recorded terms than requested iterate");
    }
    ReconstructedIterate out{x0, x0};
    for (std::size_t j = 0; j < i; ++j) {
        const ImageGrid& g = weighted_gradients[j];
        const ImageGrid& h = subgradients[j];
        require_same_shape(g, x0, "reconstruct_iterates");
        require_same_shape(h, x0, "reconstruct_iterates");
        const double cy = schedule.gamma[j] * eta;
        const double cx = table.t[i][j] * eta;
        for (std::size_t p = 0; p < x0.size(); ++p) {
            const double d = g[p] + h[p];
            out.y[p] -= cy * d;
            out.x[p] -= cx * d;
        }
    }
    return out;
}

namespace {

void check_dense_size(const BlurOperator& op) {
    if (op.height() * op.width() > kDenseLimit) {
        throw ParameterError("dense oracle limited to " + std::to_string(kDenseLimit) + " pixels");
    }
}

ImageGrid basis(const BlurOperator& op, std::size_t k) {
    ImageGrid e(op.height(), op.width(), 0.0);
    e[k] = 1.0;
    return e;
}

} // namespace

Eigen::MatrixXd dense_materialize(const BlurOperator& op) {
    check_dense_size(op);
    const auto n = static_cast<Eigen::Index>(op.height() * op.width());
    Eigen::MatrixXd A(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const ImageGrid col = op.forward(basis(op, static_cast<std::size_t>(k)));
        for (Eigen::Index r = 0; r < n; ++r) A(r, k) = col[static_cast<std::size_t>(r)];
    }
    return A;
}

Eigen::MatrixXd dense_weighting(const BlurOperator& op, const WeightingSpec& spec) {
    if (spec.n == 0) throw ParameterError("dense_weighting: n must be >= 1");
    const Eigen::MatrixXd A = dense_materialize(op);
    const double eta = op.resolve_eta(spec);
    const Eigen::MatrixXd M = eta * (A.transpose() * A);
    const auto n = A.rows();
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);  // M^(i-1)
    double binom = 1.0;
    for (unsigned i = 1; i <= spec.n; ++i) {
        binom = binom * static_cast<double>(spec.n - i + 1) / static_cast<double>(i);
        const double sign = (i % 2 == 1) ? 1.0 : -1.0;
        W += sign * binom * power;
        power = power * M;
    }
    return W;
}

Eigen::MatrixXd probe_weighting(const BlurOperator& op, const WeightingSpec& spec, WeightingPath path) {
    check_dense_size(op);
    const auto n = static_cast<Eigen::Index>(op.height() * op.width());
    Eigen::MatrixXd W(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const ImageGrid col = op.apply_weighting(spec, basis(op, static_cast<std::size_t>(k)), path);
        for (Eigen::Index r = 0; r < n; ++r) W(r, k) = col[static_cast<std::size_t>(r)];
    }
    return W;
}

namespace {

// Minimizes lambda |y| + (y - v)^2 / (2 step) on a shrinking grid.
double grid_minimize_l1(double v, double lambda, double step) {
    auto g = [&](double y) { return lambda * std::abs(y) + (y - v) * (y - v) / (2.0 * step); };
    double lo = std::min(0.0, v) - 1.0, hi = std::max(0.0, v) + 1.0;
    constexpr int kPoints = 200;
    double best = v;
    for (int round = 0; round < 60; ++round) {
        const double h = (hi - lo) / kPoints;
        double best_val = g(lo);
        best = lo;
        for (int p = 1; p <= kPoints; ++p) {
            const double y = lo + p * h;
            const double val = g(y);
            if (val < best_val) {
                best_val = val;
                best = y;
            }
        }
        // 0 is a kink and a frequent minimizer; make sure it is tried exactly.
        if (lo <= 0.0 && 0.0 <= hi && g(0.0) <= best_val) best = 0.0;
        lo = best - 2.0 * h;
        hi = best + 2.0 * h;
        if (h < 1e-16) break;
    }
    return best;
}

std::vector<double> tv_dual_solve(double tau, std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<double> y(v.begin(), v.end());
    if (n < 2 || tau == 0.0) return y;
    // y = v - D^T u with (D y)_k = y_{k+1} - y_k, |u_k| <= tau.
    std::vector<double> u(n - 1, 0.0);
    auto primal = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            double dtu = 0.0;
            if (i > 0) dtu += u[i - 1];
            if (i + 1 < n) dtu -= u[i];
            y[i] = v[i] - dtu;
        }
    };
    constexpr double kStep = 0.25;  // 1 / ||D D^T|| bound
    for (long it = 0; it < 5'000'000; ++it) {
        primal();
        double change = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            // grad of 1/2 ||v - D^T u||^2 wrt u_k is -(y_{k+1} - y_k)
            const double next = std::clamp(u[k] + kStep * (y[k + 1] - y[k]), -tau, tau);
            change = std::max(change, std::abs(next - u[k]));
            u[k] = next;
        }
        if (change < 1e-15) break;
    }
    primal();
    return y;
}

} // namespace

std::vector<double> brute_force_prox(const Regularizer& reg, double step, std::span<const double> v) {
    if (!(step > 0.0)) throw ParameterError("brute_force_prox: step must be positive");
    if (reg.kind == RegularizerKind::none || reg.lambda == 0.0) return {v.begin(), v.end()};
    if (reg.kind == RegularizerKind::l1) {
        if (v.size() > 6) throw ParameterError("brute_force_prox: l1 grid search limited to length 6");
        std::vector<double> y(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) y[i] = grid_minimize_l1(v[i], reg.lambda, step);
        return y;
    }
    if (v.size() > 64) throw ParameterError("brute_force_prox: TV dual solve limited to length 64");
    return tv_dual_solve(step * reg.lambda, v);
}

double tv_dual_violation(std::span<const double> y, std::span<const double> residual, double tau) {
    if (y.size() != residual.size()) throw ParameterError("tv_dual_violation: length mismatch");
    if (y.empty()) return 0.0;
    // residual = -D^T u  =>  u_k = -sum_{i<=k} residual_i.
    double worst = 0.0;
    double u = 0.0;
    for (std::size_t k = 0; k + 1 < y.size(); ++k) {
        u -= residual[k];
        const double scaled = u / tau;
        worst = std::max(worst, std::abs(scaled) - 1.0);
        const double jump = y[k + 1] - y[k];
        if (std::abs(jump) > 1e-9) worst = std::max(worst, std::abs(scaled - (jump > 0 ? 1.0 : -1.0)));
    }
    u -= residual.back();
    worst = std::max(worst, std::abs(u) / tau);
    return worst;
}

Problem make_random_problem(std::size_t h, std::size_t w, std::size_t kernel_side, std::uint64_t seed,
                            double noise_variance) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> weights(kernel_side * kernel_side);
    for (auto& v : weights) v = 0.1 + unit(rng);
    double total = 0.0;
    for (double v : weights) total += v;
    for (auto& v : weights) v /= total;
    auto op = build_operator(make_kernel(kernel_side, kernel_side, std::move(weights)), h, w);
    ImageGrid truth(h, w);
    for (auto& v : truth.values()) v = unit(rng);
    ImageGrid b = add_gaussian_noise(op->forward(truth), noise_variance, seed ^ 0x9e3779b97f4a7c15ULL);
    return make_problem(std::move(op), std::move(b), std::move(truth));
}

std::vector<ImageGrid> ogm_reference(const Problem& problem, std::size_t K) {
    const Schedule schedule = build_schedule(K);
    const BlurOperator& op = *problem.op;
    const double eta = 1.0 / op.lipschitz();
    ImageGrid x(op.height(), op.width(), 0.0);
    ImageGrid z = x;
    std::vector<ImageGrid> history{x};
    for (std::size_t k = 0; k < K; ++k) {
        const ImageGrid g = grad_f(op, problem.observation, x);
        ImageGrid z_next = x;
        for (std::size_t i = 0; i < x.size(); ++i) z_next[i] -= eta * g[i];
        const double a = schedule.alpha[k];
        const double a_next = schedule.alpha[k + 1];
        ImageGrid x_next = z_next;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x_next[i] += (a - 1.0) / a_next * (z_next[i] - z[i]) + a / a_next * (z_next[i] - x[i]);
        }
        x = std::move(x_next);
        z = std::move(z_next);
        history.push_back(x);
    }
    return history;
}

double relative_inf_error(const ImageGrid& value, const ImageGrid& reference) {
    return max_abs_diff(value, reference) / (1.0 + max_abs(reference));
}

} // namespace deblur::verification
