#include "deblur/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "deblur/errors.hpp"

namespace deblur {

double Kernel::sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

namespace {

void normalize(std::vector<double>& w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& v : w) v /= total;
}

double parse_double(std::string_view text, const std::string& spec) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParameterError("malformed kernel spec '" + spec + "'");
    }
    return v;
}

// Signed area of the disk intersected with the rectangle spanned by the
// origin and (x, y).
double quadrant_area(double x, double y, double radius) {
    const double sign = (x < 0.0) != (y < 0.0) ? -1.0 : 1.0;
    x = std::min(std::abs(x), radius);
    y = std::min(std::abs(y), radius);
    const double r2 = radius * radius;
    if (x * x + y * y <= r2) return sign * x * y;
    // Below the circle: a rectangle up to where the arc meets height y, then
    // the area under the arc out to x.
    const double xc = std::sqrt(r2 - y * y);
    auto under_arc = [&](double t) { return 0.5 * (t * std::sqrt(std::max(0.0, r2 - t * t)) + r2 * std::asin(t / radius)); };
    return sign * (y * xc + under_arc(x) - under_arc(xc));
}

} // namespace

Kernel make_disk_kernel(double radius) {
    if (!std::isfinite(radius) || radius <= 0.0) {
        throw ParameterError("make_disk_kernel: radius must be finite and positive");
    }
    const int half = std::max(0, static_cast<int>(std::ceil(radius - 0.5)));
    const int side = 2 * half + 1;
    const double r2 = radius * radius;

    Kernel k;
    k.size_y = k.size_x = static_cast<std::size_t>(side);
    k.anchor_y = k.anchor_x = static_cast<std::size_t>(half);
    k.weights.assign(static_cast<std::size_t>(side * side), 0.0);

    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            // Coverage is invariant under the disk's reflections; evaluate every
            // tap on its canonical image so symmetric taps are bit-identical.
            const double cx = std::min(std::abs(i - half), std::abs(j - half));
            const double cy = std::max(std::abs(i - half), std::abs(j - half));
            const double far_y = std::abs(cy) + 0.5, far_x = std::abs(cx) + 0.5;
            const double near_y = std::max(0.0, std::abs(cy) - 0.5), near_x = std::max(0.0, std::abs(cx) - 0.5);
            double w;
            if (far_y * far_y + far_x * far_x <= r2) {
                w = 1.0;  // interior taps are exactly equal
            } else if (near_y * near_y + near_x * near_x >= r2) {
                w = 0.0;
            } else {
                w = quadrant_area(cx + 0.5, cy + 0.5, radius) - quadrant_area(cx - 0.5, cy + 0.5, radius) -
                    quadrant_area(cx + 0.5, cy - 0.5, radius) + quadrant_area(cx - 0.5, cy - 0.5, radius);
            }
            k.weights[static_cast<std::size_t>(i * side + j)] = w;
        }
    }
    normalize(k.weights);
    return k;
}

Kernel make_gaussian_kernel(std::size_t size, double sigma) {
    if (size == 0) throw ParameterError("make_gaussian_kernel: size must be >= 1");
    if (!std::isfinite(sigma) || sigma <= 0.0) {
        throw ParameterError("make_gaussian_kernel: sigma must be finite and positive");
    }
    Kernel k;
    k.size_y = k.size_x = size;
    k.anchor_y = k.anchor_x = size / 2;
    k.weights.resize(size * size);
    const double center = (static_cast<double>(size) - 1.0) / 2.0;
    const double denom = 2.0 * sigma * sigma;
    for (std::size_t i = 0; i < size; ++i) {
        const double di = static_cast<double>(i) - center;
        for (std::size_t j = 0; j < size; ++j) {
            const double dj = static_cast<double>(j) - center;
            k.weights[i * size + j] = std::exp(-(di * di + dj * dj) / denom);
        }
    }
    normalize(k.weights);
    return k;
}

Kernel make_identity_kernel() { return Kernel{1, 1, {1.0}, 0, 0}; }

Kernel make_kernel(std::size_t size_y, std::size_t size_x, std::vector<double> weights) {
    if (size_y == 0 || size_x == 0 || weights.size() != size_y * size_x) {
        throw ParameterError("make_kernel: weights do not match the stated size");
    }
    return Kernel{size_y, size_x, std::move(weights), size_y / 2, size_x / 2};
}

Kernel parse_kernel_spec(const std::string& spec) {
    if (spec == "identity") return make_identity_kernel();
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ParameterError("malformed kernel spec '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string_view args = std::string_view(spec).substr(colon + 1);
    if (kind == "disk") {
        return make_disk_kernel(parse_double(args, spec));
    }
    if (kind == "gaussian") {
        const auto comma = args.find(',');
        if (comma == std::string_view::npos) throw ParameterError("malformed kernel spec '" + spec + "'");
        const double size = parse_double(args.substr(0, comma), spec);
        const double sigma = parse_double(args.substr(comma + 1), spec);
        if (size < 1.0 || size != std::floor(size)) {
            throw ParameterError("gaussian kernel size must be a positive integer in '" + spec + "'");
        }
        return make_gaussian_kernel(static_cast<std::size_t>(size), sigma);
    }
    throw ParameterError("unknown kernel kind '" + kind + "'");
}

void write_kernel_text(std::ostream& os, const Kernel& k) {
    os << fmt::format("# {} {} {} {}\n", k.size_y, k.size_x, k.anchor_y, k.anchor_x);
    for (std::size_t i = 0; i < k.size_y; ++i) {
        for (std::size_t j = 0; j < k.size_x; ++j) {
            if (j) os << ' ';
            os << fmt::format("{:.17g}", k(i, j));
        }
        os << '\n';
    }
}

} // namespace deblur
