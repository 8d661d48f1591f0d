#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "deblur/blur_operator.hpp"
#include "deblur/image.hpp"
#include "deblur/kernel.hpp"

namespace test {

inline deblur::ImageGrid random_image(std::size_t h, std::size_t w, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    deblur::ImageGrid img(h, w);
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = u(rng);
    return img;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

inline deblur::Kernel random_kernel(std::size_t ky, std::size_t kx, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(ky * kx);
    double total = 0.0;
    for (auto& x : w) total += (x = u(rng));
    for (auto& x : w) x /= total;
    return deblur::make_kernel(ky, kx, std::move(w));
}

// Direct circular convolution: out(r, c) = sum_{i,j} k(i, j) x(r + ay - i, c + ax - j).
inline deblur::ImageGrid direct_convolution(const deblur::Kernel& k, const deblur::ImageGrid& x) {
    const auto h = static_cast<long>(x.height()), w = static_cast<long>(x.width());
    deblur::ImageGrid out(x.height(), x.width());
    for (long r = 0; r < h; ++r) {
        for (long c = 0; c < w; ++c) {
            double acc = 0.0;
            for (std::size_t i = 0; i < k.size_y; ++i) {
                for (std::size_t j = 0; j < k.size_x; ++j) {
                    long rr = (r + static_cast<long>(k.anchor_y) - static_cast<long>(i)) % h;
                    long cc = (c + static_cast<long>(k.anchor_x) - static_cast<long>(j)) % w;
                    if (rr < 0) rr += h;
                    if (cc < 0) cc += w;
                    acc += k(i, j) * x(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
                }
            }
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
        }
    }
    return out;
}

} // namespace test
