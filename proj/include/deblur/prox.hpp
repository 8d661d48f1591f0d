#pragma once

#include <span>
#include <string>
#include <vector>

#include "deblur/image.hpp"

namespace deblur {

enum class RegularizerKind { none, l1, tv1d };

/// h(x) = lambda * ||x||_1, lambda * sum over rows of the 1-D total
/// variation, or zero.
struct Regularizer {
    RegularizerKind kind = RegularizerKind::none;
    double lambda = 0.0;

    bool is_identity() const noexcept { return kind == RegularizerKind::none || lambda == 0.0; }
};

RegularizerKind parse_regularizer_kind(const std::string& name);
std::string to_string(RegularizerKind kind);

/// argmin_y h(y) + ||y - v||^2 / (2 step). Throws NumericError on
/// non-finite input and ParameterError on step <= 0 or lambda < 0.
ImageGrid prox(const Regularizer& reg, double step, const ImageGrid& v);

/// sign(v) max(|v| - tau, 0), componentwise.
double soft_threshold(double v, double tau) noexcept;

/// 1-D total variation denoising: argmin_y 1/2 ||y - input||^2 + tau sum |y_i - y_{i-1}|,
/// solved exactly by Condat's direct (taut string) method. `output` must
/// have the same length as `input`.
void tv1d_denoise(std::span<const double> input, std::span<double> output, double tau);

/// Sum of absolute horizontal first differences, rows summed.
double tv_value(const ImageGrid& x);
double l1_value(const ImageGrid& x);

/// h(x), including lambda.
double regularizer_value(const Regularizer& reg, const ImageGrid& x);

/// (v - y) / step: the subgradient of h at y = prox(reg, step, v).
ImageGrid subgradient_residual(const Regularizer& reg, double step, const ImageGrid& v, const ImageGrid& y);

} // namespace deblur
