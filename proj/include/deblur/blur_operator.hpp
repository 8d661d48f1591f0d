#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "deblur/image.hpp"
#include "deblur/kernel.hpp"

namespace deblur {

/// Half-plane DFT of a real raster (height x (width/2 + 1)), as produced by
/// a real-to-complex transform.
struct Spectrum {
    std::size_t height = 0;
    std::size_t width = 0;  // spatial width; the stored row length is width/2 + 1
    std::vector<std::complex<double>> bins;

    std::size_t row_length() const noexcept { return width / 2 + 1; }
};

/// Order and step of the binomial weighting polynomial
///   W_n = sum_{i=1..n} C(n,i) (-1)^(i-1) M^(i-1),   M = eta * A^T A.
/// eta <= 0 means "use 1/L of the operator".
struct WeightingSpec {
    unsigned n = 1;
    double eta = 0.0;
};

enum class WeightingPath { horner, spectral };

/// Circular convolution on a fixed grid, diagonalized by the DFT. Immutable
/// after construction; every call owns its FFT scratch so one instance can
/// be shared between threads.
class BlurOperator {
public:
    BlurOperator(Kernel kernel, std::size_t height, std::size_t width);
    ~BlurOperator();
    BlurOperator(const BlurOperator&) = delete;
    BlurOperator& operator=(const BlurOperator&) = delete;

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    const Kernel& kernel() const noexcept { return kernel_; }
    const Spectrum& transfer() const noexcept { return transfer_; }

    ImageGrid forward(const ImageGrid& x) const;
    ImageGrid adjoint(const ImageGrid& y) const;
    /// A^T A x.
    ImageGrid normal(const ImageGrid& x) const;
    /// max |transfer|^2, the Lipschitz constant of grad(1/2 ||Ax - b||^2).
    double lipschitz() const noexcept { return lipschitz_; }

    Spectrum analyze(const ImageGrid& x) const;
    ImageGrid synthesize(Spectrum s) const;

    /// Scalar transfer of W_n at normalized frequency response m = eta |H|^2:
    /// (1 - (1 - m)^n) / m, and n at m = 0.
    static double weighting_response(unsigned n, double m);

    ImageGrid apply_weighting(const WeightingSpec& spec, const ImageGrid& g,
                              WeightingPath path = WeightingPath::spectral) const;

    /// W_n A^T (A x - b) in a single transform pair, given b's spectrum.
    /// For n == 1 no weighting multiply happens at all.
    ImageGrid weighted_gradient(const ImageGrid& x, const Spectrum& b_hat, const WeightingSpec& spec) const;

    /// Resolves eta <= 0 to 1/L.
    double resolve_eta(const WeightingSpec& spec) const;

private:
    void check_shape(const ImageGrid& x, const char* context) const;
    Spectrum multiply(Spectrum s, bool conjugate) const;
    ImageGrid shifted(const ImageGrid& x, bool inverse) const;

    Kernel kernel_;
    std::size_t height_;
    std::size_t width_;
    Spectrum transfer_;
    double lipschitz_ = 0.0;
    bool is_delta_ = false;
    std::size_t delta_row_ = 0;
    std::size_t delta_col_ = 0;

    struct Plans;
    std::unique_ptr<Plans> plans_;
};

using OperatorPtr = std::shared_ptr<const BlurOperator>;

OperatorPtr build_operator(const Kernel& kernel, std::size_t height, std::size_t width);

inline ImageGrid forward(const BlurOperator& op, const ImageGrid& x) { return op.forward(x); }
inline ImageGrid adjoint(const BlurOperator& op, const ImageGrid& y) { return op.adjoint(y); }
inline double lipschitz(const BlurOperator& op) { return op.lipschitz(); }

/// A^T (A x - b).
ImageGrid grad_f(const BlurOperator& op, const ImageGrid& b, const ImageGrid& x);

inline ImageGrid apply_weighting(const BlurOperator& op, const WeightingSpec& spec, const ImageGrid& g,
                                 WeightingPath path = WeightingPath::spectral) {
    return op.apply_weighting(spec, g, path);
}

/// Binomial coefficients C(n, i) (-1)^(i-1) for i = 1..n, index i-1.
std::vector<double> weighting_coefficients(unsigned n);

} // namespace deblur
