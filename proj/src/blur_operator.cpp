#include "deblur/blur_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "deblur/errors.hpp"

namespace deblur {

namespace {

// The FFTW planner is not thread-safe; execution on fresh arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

template <typename T>
class FftwBuffer {
public:
    explicit FftwBuffer(std::size_t n) : ptr_(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))) {
        if (!ptr_) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(ptr_); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    T* get() const noexcept { return ptr_; }

private:
    T* ptr_;
};

} // namespace

struct BlurOperator::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    Plans(std::size_t h, std::size_t w) {
        const std::size_t half = h * (w / 2 + 1);
        FftwBuffer<double> real(h * w);
        FftwBuffer<fftw_complex> cplx(half);
        std::lock_guard lock(planner_mutex());
        r2c = fftw_plan_dft_r2c_2d(static_cast<int>(h), static_cast<int>(w), real.get(), cplx.get(), FFTW_ESTIMATE);
        c2r = fftw_plan_dft_c2r_2d(static_cast<int>(h), static_cast<int>(w), cplx.get(), real.get(), FFTW_ESTIMATE);
        if (!r2c || !c2r) throw std::runtime_error("FFTW planning failed");
    }
    ~Plans() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
    }
};

BlurOperator::BlurOperator(Kernel kernel, std::size_t height, std::size_t width)
    : kernel_(std::move(kernel)), height_(height), width_(width) {
    if (height == 0 || width == 0) throw ParameterError("build_operator: empty image shape");
    if (kernel_.size_y == 0 || kernel_.size_x == 0 || kernel_.weights.size() != kernel_.size_y * kernel_.size_x) {
        throw ParameterError("build_operator: malformed kernel");
    }
    if (kernel_.size_y > height || kernel_.size_x > width) {
        throw ParameterError("build_operator: kernel " + std::to_string(kernel_.size_y) + "x" +
                             std::to_string(kernel_.size_x) + " does not fit in image " + std::to_string(height) +
                             "x" + std::to_string(width));
    }
    plans_ = std::make_unique<Plans>(height, width);

    // Wrap the kernel so its anchor tap lands on the origin.
    ImageGrid embedded(height, width, 0.0);
    for (std::size_t i = 0; i < kernel_.size_y; ++i) {
        const std::size_t r = (i + height - kernel_.anchor_y % height) % height;
        for (std::size_t j = 0; j < kernel_.size_x; ++j) {
            const std::size_t c = (j + width - kernel_.anchor_x % width) % width;
            embedded(r, c) += kernel_(i, j);
        }
    }
    transfer_ = analyze(embedded);

    // A unit delta is a pure circular shift; apply it exactly.
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < embedded.size(); ++i) {
        if (embedded[i] != 0.0) {
            ++nonzero;
            delta_row_ = i / width;
            delta_col_ = i % width;
            is_delta_ = embedded[i] == 1.0;
        }
    }
    is_delta_ = is_delta_ && nonzero == 1;
    for (const auto& z : transfer_.bins) lipschitz_ = std::max(lipschitz_, std::norm(z));
}

BlurOperator::~BlurOperator() = default;

void BlurOperator::check_shape(const ImageGrid& x, const char* context) const {
    if (x.height() != height_ || x.width() != width_) {
        throw ParameterError(std::string(context) + ": image " + std::to_string(x.height()) + "x" +
                             std::to_string(x.width()) + " does not match operator " + std::to_string(height_) +
                             "x" + std::to_string(width_));
    }
}

Spectrum BlurOperator::analyze(const ImageGrid& x) const {
    check_shape(x, "analyze");
    Spectrum s{height_, width_, {}};
    const std::size_t half = height_ * s.row_length();
    FftwBuffer<double> in(x.size());
    FftwBuffer<fftw_complex> out(half);
    std::memcpy(in.get(), x.values().data(), sizeof(double) * x.size());
    fftw_execute_dft_r2c(plans_->r2c, in.get(), out.get());
    s.bins.resize(half);
    for (std::size_t i = 0; i < half; ++i) s.bins[i] = {out.get()[i][0], out.get()[i][1]};
    return s;
}

ImageGrid BlurOperator::synthesize(Spectrum s) const {
    const std::size_t half = height_ * (width_ / 2 + 1);
    if (s.height != height_ || s.width != width_ || s.bins.size() != half) {
        throw ParameterError("synthesize: spectrum does not match operator shape");
    }
    FftwBuffer<fftw_complex> in(half);
    FftwBuffer<double> out(height_ * width_);
    for (std::size_t i = 0; i < half; ++i) {
        in.get()[i][0] = s.bins[i].real();
        in.get()[i][1] = s.bins[i].imag();
    }
    fftw_execute_dft_c2r(plans_->c2r, in.get(), out.get());
    const double scale = 1.0 / static_cast<double>(height_ * width_);
    std::vector<double> data(out.get(), out.get() + height_ * width_);
    for (auto& v : data) v *= scale;
    return ImageGrid(height_, width_, std::move(data));
}

Spectrum BlurOperator::multiply(Spectrum s, bool conjugate) const {
    for (std::size_t i = 0; i < s.bins.size(); ++i) {
        s.bins[i] *= conjugate ? std::conj(transfer_.bins[i]) : transfer_.bins[i];
    }
    return s;
}

ImageGrid BlurOperator::shifted(const ImageGrid& x, bool inverse) const {
    ImageGrid out(height_, width_);
    const std::size_t dy = inverse ? (height_ - delta_row_) % height_ : delta_row_;
    const std::size_t dx = inverse ? (width_ - delta_col_) % width_ : delta_col_;
    for (std::size_t r = 0; r < height_; ++r) {
        for (std::size_t c = 0; c < width_; ++c) out((r + dy) % height_, (c + dx) % width_) = x(r, c);
    }
    return out;
}

ImageGrid BlurOperator::forward(const ImageGrid& x) const {
    if (is_delta_) {
        check_shape(x, "forward");
        return shifted(x, false);
    }
    return synthesize(multiply(analyze(x), false));
}

ImageGrid BlurOperator::adjoint(const ImageGrid& y) const {
    if (is_delta_) {
        check_shape(y, "adjoint");
        return shifted(y, true);
    }
    return synthesize(multiply(analyze(y), true));
}

ImageGrid BlurOperator::normal(const ImageGrid& x) const {
    if (is_delta_) {
        check_shape(x, "normal");
        return x;
    }
    Spectrum s = analyze(x);
    for (std::size_t i = 0; i < s.bins.size(); ++i) s.bins[i] *= std::norm(transfer_.bins[i]);
    return synthesize(std::move(s));
}

double BlurOperator::weighting_response(unsigned n, double m) {
    if (n == 1) return 1.0;
    if (m == 0.0) return static_cast<double>(n);
    // 1 - (1-m)^n loses digits for small m; expm1/log1p keeps them.
    if (std::abs(m) < 0.5) return -std::expm1(static_cast<double>(n) * std::log1p(-m)) / m;
    return (1.0 - std::pow(1.0 - m, static_cast<double>(n))) / m;
}

double BlurOperator::resolve_eta(const WeightingSpec& spec) const {
    return spec.eta > 0.0 ? spec.eta : 1.0 / lipschitz_;
}

std::vector<double> weighting_coefficients(unsigned n) {
    std::vector<double> c(n);
    double binom = 1.0;  // C(n, 0)
    for (unsigned i = 1; i <= n; ++i) {
        binom = binom * static_cast<double>(n - i + 1) / static_cast<double>(i);
        c[i - 1] = (i % 2 == 1) ? binom : -binom;
    }
    return c;
}

ImageGrid BlurOperator::apply_weighting(const WeightingSpec& spec, const ImageGrid& g, WeightingPath path) const {
    check_shape(g, "apply_weighting");
    if (spec.n == 0) throw ParameterError("apply_weighting: order n must be >= 1");
    if (!(spec.eta >= 0.0) || !std::isfinite(spec.eta)) throw ParameterError("apply_weighting: eta must be positive");
    if (spec.n == 1) return g;
    const double eta = resolve_eta(spec);

    if (path == WeightingPath::spectral) {
        Spectrum s = analyze(g);
        for (std::size_t i = 0; i < s.bins.size(); ++i) {
            s.bins[i] *= weighting_response(spec.n, eta * std::norm(transfer_.bins[i]));
        }
        return synthesize(std::move(s));
    }

    // Horner in M: n - 1 applications of eta A^T A.
    const auto c = weighting_coefficients(spec.n);
    ImageGrid acc = c.back() * g;
    for (std::size_t p = c.size() - 1; p-- > 0;) {
        acc = eta * normal(acc);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c[p] * g[i];
    }
    return acc;
}

ImageGrid BlurOperator::weighted_gradient(const ImageGrid& x, const Spectrum& b_hat, const WeightingSpec& spec) const {
    Spectrum s = analyze(x);
    if (b_hat.bins.size() != s.bins.size()) throw ParameterError("weighted_gradient: observation spectrum mismatch");
    const double eta = spec.n == 1 ? 0.0 : resolve_eta(spec);
    for (std::size_t i = 0; i < s.bins.size(); ++i) {
        const auto& h = transfer_.bins[i];
        std::complex<double> v = std::conj(h) * (h * s.bins[i] - b_hat.bins[i]);
        if (spec.n != 1) v *= weighting_response(spec.n, eta * std::norm(h));
        s.bins[i] = v;
    }
    return synthesize(std::move(s));
}

OperatorPtr build_operator(const Kernel& kernel, std::size_t height, std::size_t width) {
    return std::make_shared<const BlurOperator>(kernel, height, width);
}

ImageGrid grad_f(const BlurOperator& op, const ImageGrid& b, const ImageGrid& x) {
    require_same_shape(b, x, "grad_f");
    ImageGrid r = op.forward(x);
    r -= b;
    return op.adjoint(r);
}

} // namespace deblur
