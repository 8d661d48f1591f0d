#include "deblur/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "deblur/errors.hpp"
#include "deblur/image_io.hpp"

namespace deblur {

namespace {

template <typename T>
T parse_unsigned(const std::string& text, const char* what) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw ParameterError(std::string("synthetic image: bad ") + what + " '" + text + "'");
    return value;
}

void check_size(std::size_t height, std::size_t width) {
    if (height == 0 || width == 0) throw ParameterError("synthetic image: size must be positive");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

} // namespace

ImageGrid make_checkerboard(std::size_t height, std::size_t width, std::size_t period) {
    check_size(height, width);
    if (period < 2 || period % 2 != 0) throw ParameterError("checkerboard: period must be even and >= 2");
    const std::size_t half = period / 2;
    ImageGrid img(height, width);
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) img(r, c) = ((r / half + c / half) % 2 == 0) ? 0.0 : 1.0;
    }
    return img;
}

ImageGrid make_gradient(std::size_t height, std::size_t width) {
    check_size(height, width);
    ImageGrid img(height, width);
    const double span = static_cast<double>(height + width - 2);
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) img(r, c) = span > 0 ? static_cast<double>(r + c) / span : 0.0;
    }
    return img;
}

ImageGrid make_blobs(std::size_t height, std::size_t width, std::uint64_t seed) {
    check_size(height, width);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double scale = static_cast<double>(std::min(height, width));
    struct Bump {
        double r, c, sigma, amp;
    };
    std::vector<Bump> bumps(8);
    for (auto& b : bumps) {
        b = {unit(rng) * height, unit(rng) * width, scale * (0.05 + 0.1 * unit(rng)), 0.3 + 0.7 * unit(rng)};
    }
    ImageGrid img(height, width, 0.0);
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            double v = 0.0;
            for (const auto& b : bumps) {
                const double dr = r - b.r, dc = c - b.c;
                v += b.amp * std::exp(-(dr * dr + dc * dc) / (2.0 * b.sigma * b.sigma));
            }
            img(r, c) = v;
        }
    }
    const auto [lo, hi] = std::minmax_element(img.values().begin(), img.values().end());
    const double low = *lo, range = *hi - *lo;
    for (auto& v : img.values()) v = range > 0 ? (v - low) / range : 0.0;
    return img;
}

ImageGrid make_scene(std::size_t height, std::size_t width, std::uint64_t seed) {
    check_size(height, width);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double H = static_cast<double>(height), W = static_cast<double>(width);

    ImageGrid img(height, width);
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            img(r, c) = 0.2 + 0.25 * (r / H) + 0.1 * std::sin(2.0 * std::numbers::pi * c / W);
        }
    }
    for (int i = 0; i < 5; ++i) {
        const double r0 = unit(rng) * H * 0.8, c0 = unit(rng) * W * 0.8;
        const double rh = H * (0.08 + 0.2 * unit(rng)), cw = W * (0.08 + 0.2 * unit(rng));
        const double level = unit(rng);
        for (std::size_t r = 0; r < height; ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                if (r >= r0 && r < r0 + rh && c >= c0 && c < c0 + cw) img(r, c) = level;
            }
        }
    }
    for (int i = 0; i < 4; ++i) {
        const double rc = unit(rng) * H, cc = unit(rng) * W, rad = std::min(H, W) * (0.05 + 0.12 * unit(rng));
        const double level = unit(rng);
        for (std::size_t r = 0; r < height; ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                const double dr = r - rc, dc = c - cc;
                if (dr * dr + dc * dc <= rad * rad) img(r, c) = level;
            }
        }
    }
    for (int i = 0; i < 3; ++i) {
        const double rc = unit(rng) * H, cc = unit(rng) * W, sigma = std::min(H, W) * 0.06;
        const double amp = 0.4 * (unit(rng) - 0.5);
        for (std::size_t r = 0; r < height; ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                const double dr = r - rc, dc = c - cc;
                img(r, c) += amp * std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
            }
        }
    }
    // Stripes of period 4 in one corner patch.
    const std::size_t pr = height * 3 / 4, pc = width / 16;
    for (std::size_t r = pr; r < std::min(height, pr + height / 8); ++r) {
        for (std::size_t c = pc; c < std::min(width, pc + width / 5); ++c) img(r, c) = (c / 2) % 2 == 0 ? 0.9 : 0.1;
    }
    for (auto& v : img.values()) v = std::clamp(v, 0.0, 1.0);
    return img;
}

bool is_synthetic_spec(const std::string& spec) noexcept { return spec.rfind("synthetic:", 0) == 0; }

ImageGrid emit_synthetic_image(const std::string& spec) {
    if (!is_synthetic_spec(spec)) throw ParameterError("synthetic image: spec must start with 'synthetic:'");
    const auto parts = split(spec, ':');
    if (parts.size() < 3 || parts.size() > 4) {
        throw ParameterError("synthetic image: expected synthetic:<name>:<size>[:<param>], got '" + spec + "'");
    }
    const std::string& name = parts[1];
    const auto size = parse_unsigned<std::size_t>(parts[2], "size");
    const bool has_param = parts.size() == 4;
    if (name == "checkerboard") {
        return make_checkerboard(size, size, has_param ? parse_unsigned<std::size_t>(parts[3], "period") : 8);
    }
    if (name == "gradient") {
        if (has_param) throw ParameterError("synthetic image: gradient takes no parameter");
        return make_gradient(size, size);
    }
    const auto seed = has_param ? parse_unsigned<std::uint64_t>(parts[3], "seed") : std::uint64_t{1};
    if (name == "blobs") return make_blobs(size, size, seed);
    if (name == "scene") return make_scene(size, size, seed);
    throw ParameterError("synthetic image: unknown generator '" + name + "'");
}

ImageGrid load_image_source(const std::string& source) {
    return is_synthetic_spec(source) ? emit_synthetic_image(source) : read_image(source);
}

} // namespace deblur
