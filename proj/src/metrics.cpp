#include "deblur/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "deblur/errors.hpp"

namespace deblur {

void MetricsConfig::validate() const {
    if (!(dynamic_range > 0.0) || !std::isfinite(dynamic_range)) throw ParameterError("metrics: dynamic range must be positive");
    if (ssim_window < 1 || ssim_window % 2 == 0) throw ParameterError("metrics: SSIM window must be a positive odd integer");
    if (!(ssim_sigma > 0.0)) throw ParameterError("metrics: SSIM sigma must be positive");
}

PsnrMode parse_psnr_mode(const std::string& s) {
    if (s == "standard") return PsnrMode::standard;
    if (s == "sse") return PsnrMode::sse;
    throw ParameterError("unknown PSNR mode '" + s + "'");
}

SsimMode parse_ssim_mode(const std::string& s) {
    if (s == "global") return SsimMode::global;
    if (s == "windowed") return SsimMode::windowed;
    throw ParameterError("unknown SSIM mode '" + s + "'");
}

std::string to_string(PsnrMode m) { return m == PsnrMode::standard ? "standard" : "sse"; }
std::string to_string(SsimMode m) { return m == SsimMode::global ? "global" : "windowed"; }

double psnr(const ImageGrid& restored, const ImageGrid& original, const MetricsConfig& cfg) {
    require_same_shape(restored, original, "psnr");
    cfg.validate();
    if (cfg.psnr_mode == PsnrMode::standard) {
        double sse = 0.0;
        for (std::size_t i = 0; i < restored.size(); ++i) {
            const double d = restored[i] - original[i];
            sse += d * d;
        }
        if (sse == 0.0) return std::numeric_limits<double>::infinity();
        const double mse = sse / static_cast<double>(restored.size());
        return 10.0 * std::log10(cfg.dynamic_range * cfg.dynamic_range / mse);
    }
    const double scale = 255.0 / cfg.dynamic_range;
    double sse = 0.0;
    for (std::size_t i = 0; i < restored.size(); ++i) {
        const double d = scale * (restored[i] - original[i]);
        sse += d * d;
    }
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(255.0 * 255.0 / sse);
}

namespace {

double ssim_index(double mu_a, double mu_b, double var_a, double var_b, double cov, double c1, double c2) {
    return ((2.0 * (mu_a * mu_b) + c1) * (2.0 * cov + c2)) /
           ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
}

double ssim_global(const ImageGrid& a, const ImageGrid& b, double c1, double c2) {
    const double n = static_cast<double>(a.size());
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
    }
    const double mu_a = sa / n, mu_b = sb / n;
    double vaa = 0.0, vbb = 0.0, vab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mu_a, db = b[i] - mu_b;
        vaa += da * da;
        vbb += db * db;
        vab += da * db;
    }
    const double denom = a.size() > 1 ? n - 1.0 : 1.0;
    return ssim_index(mu_a, mu_b, vaa / denom, vbb / denom, vab / denom, c1, c2);
}

double ssim_windowed(const ImageGrid& a, const ImageGrid& b, const MetricsConfig& cfg) {
    const auto win = static_cast<std::size_t>(cfg.ssim_window);
    if (a.height() < win || a.width() < win) throw ParameterError("ssim: image smaller than the SSIM window");
    std::vector<double> w(win * win);
    const double center = (static_cast<double>(win) - 1.0) / 2.0;
    double total = 0.0;
    for (std::size_t i = 0; i < win; ++i) {
        for (std::size_t j = 0; j < win; ++j) {
            const double di = static_cast<double>(i) - center, dj = static_cast<double>(j) - center;
            w[i * win + j] = std::exp(-(di * di + dj * dj) / (2.0 * cfg.ssim_sigma * cfg.ssim_sigma));
            total += w[i * win + j];
        }
    }
    for (auto& v : w) v /= total;

    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t r0 = 0; r0 + win <= a.height(); ++r0) {
        for (std::size_t c0 = 0; c0 + win <= a.width(); ++c0) {
            double mu_a = 0.0, mu_b = 0.0;
            for (std::size_t i = 0; i < win; ++i) {
                for (std::size_t j = 0; j < win; ++j) {
                    mu_a += w[i * win + j] * a(r0 + i, c0 + j);
                    mu_b += w[i * win + j] * b(r0 + i, c0 + j);
                }
            }
            double vaa = 0.0, vbb = 0.0, vab = 0.0;
            for (std::size_t i = 0; i < win; ++i) {
                for (std::size_t j = 0; j < win; ++j) {
                    const double da = a(r0 + i, c0 + j) - mu_a, db = b(r0 + i, c0 + j) - mu_b;
                    // Products grouped so that swapping the images is bit-exact.
                    vaa += w[i * win + j] * (da * da);
                    vbb += w[i * win + j] * (db * db);
                    vab += w[i * win + j] * (da * db);
                }
            }
            acc += ssim_index(mu_a, mu_b, vaa, vbb, vab, cfg.c1(), cfg.c2());
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

} // namespace

double ssim(const ImageGrid& restored, const ImageGrid& original, const MetricsConfig& cfg) {
    require_same_shape(restored, original, "ssim");
    cfg.validate();
    if (cfg.ssim_mode == SsimMode::global) return ssim_global(restored, original, cfg.c1(), cfg.c2());
    return ssim_windowed(restored, original, cfg);
}

} // namespace deblur
