#include "deblur/noise.hpp"

#include <cmath>
#include <random>

#include "deblur/errors.hpp"

namespace deblur {

ImageGrid add_gaussian_noise(const ImageGrid& x, double variance, std::uint64_t seed) {
    if (!std::isfinite(variance) || variance < 0.0) {
        throw ParameterError("add_gaussian_noise: variance must be finite and nonnegative");
    }
    if (variance == 0.0) return x;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, std::sqrt(variance));
    ImageGrid out = x;
    for (auto& v : out.values()) v += dist(rng);
    return out;
}

} // namespace deblur
