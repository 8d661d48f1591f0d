#pragma once

#include <string>

#include "deblur/image.hpp"

namespace deblur {

enum class PsnrMode {
    standard,        // 10 log10(range^2 / mean squared error)
    sse,       // 20 log10(255^2 / sum of squared errors), images rescaled to 0..255
};

enum class SsimMode {
    global,    // one set of statistics over the whole image
    windowed,  // mean of the local index over Gaussian-weighted windows
};

struct MetricsConfig {
    PsnrMode psnr_mode = PsnrMode::standard;
    double dynamic_range = 1.0;
    SsimMode ssim_mode = SsimMode::global;
    int ssim_window = 11;
    double ssim_sigma = 1.5;

    double c1() const noexcept { return (0.01 * dynamic_range) * (0.01 * dynamic_range); }
    double c2() const noexcept { return (0.03 * dynamic_range) * (0.03 * dynamic_range); }
    void validate() const;
};

PsnrMode parse_psnr_mode(const std::string& s);
SsimMode parse_ssim_mode(const std::string& s);
std::string to_string(PsnrMode m);
std::string to_string(SsimMode m);

/// Returns +infinity when the images are identical.
double psnr(const ImageGrid& restored, const ImageGrid& original, const MetricsConfig& cfg = {});

double ssim(const ImageGrid& restored, const ImageGrid& original, const MetricsConfig& cfg = {});

} // namespace deblur
