#include "deblur/prox.hpp"

#include <cmath>

#include "deblur/errors.hpp"

namespace deblur {

RegularizerKind parse_regularizer_kind(const std::string& name) {
    if (name == "none") return RegularizerKind::none;
    if (name == "l1") return RegularizerKind::l1;
    if (name == "tv" || name == "tv1d") return RegularizerKind::tv1d;
    throw ParameterError("unknown regularizer '" + name + "' (expected none, l1 or tv)");
}

std::string to_string(RegularizerKind kind) {
    switch (kind) {
    case RegularizerKind::none: return "none";
    case RegularizerKind::l1: return "l1";
    case RegularizerKind::tv1d: return "tv";
    }
    return "?";
}

double soft_threshold(double v, double tau) noexcept {
    if (v > tau) return v - tau;
    if (v < -tau) return v + tau;
    return 0.0;
}

// Condat, "A direct algorithm for 1D total variation denoising" (2013).
// Scans left to right keeping the admissible range [vmin, vmax] of the
// current segment value and the running dual variables umin/umax; a segment
// is emitted when the range can no longer be kept.
void tv1d_denoise(std::span<const double> input, std::span<double> output, double tau) {
    const std::ptrdiff_t width = static_cast<std::ptrdiff_t>(input.size());
    if (output.size() != input.size()) throw ParameterError("tv1d_denoise: output length mismatch");
    if (width == 0) return;
    if (width == 1 || tau == 0.0) {
        std::copy(input.begin(), input.end(), output.begin());
        return;
    }
    std::ptrdiff_t k = 0, k0 = 0;
    double umin = tau, umax = -tau;
    double vmin = input[0] - tau, vmax = input[0] + tau;
    std::ptrdiff_t kplus = 0, kminus = 0;
    const double twotau = 2.0 * tau;
    const double mintau = -tau;
    for (;;) {
        while (k == width - 1) {
            if (umin < 0.0) {
                do output[k0++] = vmin; while (k0 <= kminus);
                k = kminus = k0;
                vmin = input[k];
                umin = tau;
                umax = vmin + umin - vmax;
            } else if (umax > 0.0) {
                do output[k0++] = vmax; while (k0 <= kplus);
                k = kplus = k0;
                vmax = input[k];
                umax = mintau;
                umin = vmax + umax - vmin;
            } else {
                vmin += umin / static_cast<double>(k - k0 + 1);
                do output[k0++] = vmin; while (k0 <= k);
                return;
            }
        }
        if ((umin += input[k + 1] - vmin) < mintau) {
            do output[k0++] = vmin; while (k0 <= kminus);
            k = kplus = kminus = k0;
            vmin = input[k];
            vmax = vmin + twotau;
            umin = tau;
            umax = mintau;
        } else if ((umax += input[k + 1] - vmax) > tau) {
            do output[k0++] = vmax; while (k0 <= kplus);
            k = kplus = kminus = k0;
            vmax = input[k];
            vmin = vmax - twotau;
            umin = tau;
            umax = mintau;
        } else {
            ++k;
            if (umin >= tau) {
                kminus = k;
                vmin += (umin - tau) / static_cast<double>(kminus - k0 + 1);
                umin = tau;
            }
            if (umax <= mintau) {
                kplus = k;
                vmax += (umax + tau) / static_cast<double>(kplus - k0 + 1);
                umax = mintau;
            }
        }
    }
}

ImageGrid prox(const Regularizer& reg, double step, const ImageGrid& v) {
    if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("prox: step must be finite and positive");
    if (!(reg.lambda >= 0.0) || !std::isfinite(reg.lambda)) throw ParameterError("prox: lambda must be nonnegative");
    if (!all_finite(v)) throw NumericError("prox: input contains non-finite values");
    if (reg.is_identity()) return v;
    const double tau = step * reg.lambda;
    ImageGrid y(v.height(), v.width());
    switch (reg.kind) {
    case RegularizerKind::l1:
        for (std::size_t i = 0; i < v.size(); ++i) y[i] = soft_threshold(v[i], tau);
        break;
    case RegularizerKind::tv1d:
        for (std::size_t r = 0; r < v.height(); ++r) tv1d_denoise(v.row(r), y.row(r), tau);
        break;
    case RegularizerKind::none:
        break;
    }
    return y;
}

double tv_value(const ImageGrid& x) {
    double acc = 0.0;
    for (std::size_t r = 0; r < x.height(); ++r) {
        const auto row = x.row(r);
        for (std::size_t c = 1; c < row.size(); ++c) acc += std::abs(row[c] - row[c - 1]);
    }
    return acc;
}

double l1_value(const ImageGrid& x) {
    double acc = 0.0;
    for (double v : x.values()) acc += std::abs(v);
    return acc;
}

double regularizer_value(const Regularizer& reg, const ImageGrid& x) {
    switch (reg.kind) {
    case RegularizerKind::none: return 0.0;
    case RegularizerKind::l1: return reg.lambda * l1_value(x);
    case RegularizerKind::tv1d: return reg.lambda * tv_value(x);
    }
    return 0.0;
}

ImageGrid subgradient_residual(const Regularizer& /*reg*/, double step, const ImageGrid& v, const ImageGrid& y) {
    if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("subgradient_residual: step must be positive");
    require_same_shape(v, y, "subgradient_residual");
    ImageGrid r = v - y;
    for (auto& e : r.values()) e /= step;
    return r;
}

} // namespace deblur
