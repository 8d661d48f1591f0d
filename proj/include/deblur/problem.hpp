#pragma once

#include <optional>

#include "deblur/blur_operator.hpp"
#include "deblur/image.hpp"
#include "deblur/prox.hpp"

namespace deblur {

/// One deblurring instance: min_x 1/2 ||A x - b||^2 + h(x). The reference
/// image, when present, is only used for PSNR/SSIM reporting.
struct Problem {
    OperatorPtr op;
    ImageGrid observation;
    Spectrum observation_spectrum;
    std::optional<ImageGrid> reference;
};

Problem make_problem(OperatorPtr op, ImageGrid observation, std::optional<ImageGrid> reference = std::nullopt);

/// Tol := 1/2 ||A x - b||^2.
double evaluate_tol(const Problem& problem, const ImageGrid& x);

/// phi(x) = 1/2 ||A x - b||^2 + h(x).
double evaluate_objective(const Problem& problem, const Regularizer& reg, const ImageGrid& x);

} // namespace deblur
