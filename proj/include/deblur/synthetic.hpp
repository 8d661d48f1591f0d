#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "deblur/image.hpp"

namespace deblur {

/// Alternating 0/1 squares of side period/2, so the pattern repeats every
/// `period` pixels along both axes. period must be even and >= 2.
ImageGrid make_checkerboard(std::size_t height, std::size_t width, std::size_t period);

/// Diagonal ramp from 0 at the top-left corner to 1 at the bottom-right.
ImageGrid make_gradient(std::size_t height, std::size_t width);

/// Sum of smooth Gaussian bumps at seeded positions, rescaled to [0, 1].
ImageGrid make_blobs(std::size_t height, std::size_t width, std::uint64_t seed);

/// Piecewise-smooth test scene: shaded background, flat rectangles and
/// discs with sharp edges, a few smooth bumps and a thin-stripe patch.
ImageGrid make_scene(std::size_t height, std::size_t width, std::uint64_t seed);

/// "synthetic:<name>:<size>[:<param>]" with name in {checkerboard, gradient,
/// blobs, scene}. The optional param is the period for checkerboard (default
/// 8) and the seed for blobs and scene (default 1). Images are square.
ImageGrid emit_synthetic_image(const std::string& spec);

bool is_synthetic_spec(const std::string& spec) noexcept;

/// A synthetic spec or an image file path.
ImageGrid load_image_source(const std::string& source);

} // namespace deblur
