#pragma once

#include <cstdint>

#include "deblur/image.hpp"

namespace deblur {

/// Adds i.i.d. N(0, variance) samples. The argument is a variance, not a
/// standard deviation. Same seed, same output.
ImageGrid add_gaussian_noise(const ImageGrid& x, double variance, std::uint64_t seed);

} // namespace deblur
