#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "deblur/blur_operator.hpp"
#include "deblur/image.hpp"
#include "deblur/problem.hpp"
#include "deblur/prox.hpp"
#include "deblur/schedule.hpp"

// Independent oracles for the solver family: dense operators, the t/s
// coefficient tables behind the closed-form OptISTA iterates, and brute
// force prox minimizers. Everything here favours directness over speed.
namespace deblur::verification {

/// Lower-triangular coefficient tables. t[i][j] and s[i][j] are defined for
/// i in [1, K], j in [0, i-1]; row 0 is empty.
struct CoefficientTable {
    std::size_t K = 0;
    std::vector<std::vector<double>> t;
    std::vector<std::vector<double>> s;
};

/// t from its defining sums:
///   t[i+1][i] = 1 + (2 a_i - 1) / a_{i+1}
///   t[i+1][j] = t[j+1][j] + sum_{k=j+1..i} (2 a_j / a_{k+1} - t[k][j] / a_{k+1}),  j < i
/// and s by differencing consecutive rows of t.
CoefficientTable build_coefficients(const Schedule& schedule);

/// s from the product recursion
///   s[i+1][j]   = ((a_i - 1)/a_{i+1}) s[i][j]          j <= i-2
///   s[i+1][i-1] = ((a_i - 1)/a_{i+1}) (s[i][i-1] - 1)
///   s[i+1][i]   = 1 + (2 a_i - 1)/a_{i+1}
std::vector<std::vector<double>> s_by_recursion(const Schedule& schedule);

/// max |s_a - s_b| over the triangle.
double max_table_difference(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b);

/// max over (i, j) of |t[i][j] - sum_{k=j+1..i} s[k][j]|.
double telescoping_error(const CoefficientTable& table);

/// max_j |gamma_j - t[K][j]|.
double check_gamma_equals_tK(const Schedule& schedule, const CoefficientTable& table);

struct ReconstructedIterate {
    ImageGrid x;
    ImageGrid y;
};

/// Closed form of iterate i >= 1 from recorded terms:
///   y_i = x_0 - sum_{j<i} gamma_j eta (G_j + H_j)
///   x_i = x_0 - sum_{j<i} t[i][j] eta (G_j + H_j)
/// with G_j = W_n grad f(x_j) and H_j = h'(y_{j+1}).
ReconstructedIterate reconstruct_iterates(const ImageGrid& x0, std::span<const ImageGrid> weighted_gradients,
                                          std::span<const ImageGrid> subgradients, const Schedule& schedule,
                                          const CoefficientTable& table, double eta, std::size_t i);

/// Largest grid handled by the dense oracles.
inline constexpr std::size_t kDenseLimit = 256;

/// A as an explicit matrix, one forward() per basis vector.
Eigen::MatrixXd dense_materialize(const BlurOperator& op);

/// W_n from the literal binomial sum of dense powers of eta A^T A.
Eigen::MatrixXd dense_weighting(const BlurOperator& op, const WeightingSpec& spec);

/// W_n by applying the matrix-free weighting to basis vectors.
Eigen::MatrixXd probe_weighting(const BlurOperator& op, const WeightingSpec& spec, WeightingPath path);

/// Brute-force prox of a short signal: per-coordinate grid refinement for
/// l1 (length <= 6), projected gradient on the box-constrained dual for TV
/// (length <= 64).
std::vector<double> brute_force_prox(const Regularizer& reg, double step, std::span<const double> v);

/// Checks that `residual` is a subgradient of tau * TV at y: the running
/// sums u_k = -sum_{i<=k} residual_i / tau must stay in [-1, 1], equal
/// sign(y_{k+1} - y_k) at jumps, and close to zero at the end. Returns the
/// worst violation.
double tv_dual_violation(std::span<const double> y, std::span<const double> residual, double tau);

/// Random deblurring instance on an h x w grid: a normalized nonnegative
/// kernel of side `kernel_side`, a uniform [0, 1] ground truth and a lightly
/// noisy observation.
Problem make_random_problem(std::size_t h, std::size_t w, std::size_t kernel_side, std::uint64_t seed,
                            double noise_variance = 1e-4);

/// Kim-Fessler OGM on the smooth part only, written out directly:
///   z_{k+1} = x_k - eta grad f(x_k)
///   x_{k+1} = z_{k+1} + ((a_k - 1)/a_{k+1})(z_{k+1} - z_k) + (a_k/a_{k+1})(z_{k+1} - x_k)
/// with the K-step schedule and eta = 1/L. Returns x_0..x_K.
std::vector<ImageGrid> ogm_reference(const Problem& problem, std::size_t K);

/// Max abs difference relative to 1 + max |reference|.
double relative_inf_error(const ImageGrid& value, const ImageGrid& reference);

} // namespace deblur::verification
