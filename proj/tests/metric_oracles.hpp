#pragma once

#include <cmath>

#include "deblur/image.hpp"

namespace test {

// Windowed SSIM evaluated with moment formulas: sigma^2 = E[x^2] - mu^2.
inline double windowed_ssim_oracle(const deblur::ImageGrid& a, const deblur::ImageGrid& b, double range) {
    const int win = 11;
    const double sigma = 1.5;
    double w[win][win];
    double total = 0.0;
    for (int i = 0; i < win; ++i) {
        for (int j = 0; j < win; ++j) {
            w[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2.0 * sigma * sigma));
            total += w[i][j];
        }
    }
    const double c1 = std::pow(0.01 * range, 2), c2 = std::pow(0.03 * range, 2);
    double acc = 0.0;
    int count = 0;
    for (std::size_t r = 0; r + win <= a.height(); ++r) {
        for (std::size_t c = 0; c + win <= a.width(); ++c) {
            double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
            for (int i = 0; i < win; ++i) {
                for (int j = 0; j < win; ++j) {
                    const double k = w[i][j] / total;
                    const double x = a(r + static_cast<std::size_t>(i), c + static_cast<std::size_t>(j));
                    const double y = b(r + static_cast<std::size_t>(i), c + static_cast<std::size_t>(j));
                    ma += k * x;
                    mb += k * y;
                    saa += k * x * x;
                    sbb += k * y * y;
                    sab += k * x * y;
                }
            }
            const double va = saa - ma * ma, vb = sbb - mb * mb, cov = sab - ma * mb;
            acc += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    }
    return acc / count;
}

inline double global_ssim_oracle(const deblur::ImageGrid& a, const deblur::ImageGrid& b, double range) {
    const double n = static_cast<double>(a.size());
    const double ma = deblur::sum(a) / n, mb = deblur::sum(b) / n;
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += a[i] * a[i];
        sbb += b[i] * b[i];
        sab += a[i] * b[i];
    }
    const double va = (saa - n * ma * ma) / (n - 1), vb = (sbb - n * mb * mb) / (n - 1), cov = (sab - n * ma * mb) / (n - 1);
    const double c1 = std::pow(0.01 * range, 2), c2 = std::pow(0.03 * range, 2);
    return ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
}

// 20 log10(255^2 / sum of squared errors) after scaling [0, 1] data to 0..255.
inline double sse_psnr_oracle(const deblur::ImageGrid& a, const deblur::ImageGrid& b) {
    double sse = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sse += std::pow(255.0 * a[i] - 255.0 * b[i], 2);
    return 20.0 * std::log10(255.0 * 255.0 / sse);
}

inline double standard_psnr_oracle(const deblur::ImageGrid& a, const deblur::ImageGrid& b) {
    double sse = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sse += (a[i] - b[i]) * (a[i] - b[i]);
    return 10.0 * std::log10(static_cast<double>(a.size()) / sse);
}

} // namespace test
