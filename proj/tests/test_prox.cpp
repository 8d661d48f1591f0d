#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "deblur/errors.hpp"
#include "deblur/prox.hpp"
#include "deblur/verification.hpp"
#include "helpers.hpp"

using namespace deblur;

namespace {

ImageGrid row(std::vector<double> v) {
    const std::size_t n = v.size();
    return ImageGrid(1, n, std::move(v));
}

double prox_objective(const Regularizer& reg, double step, const ImageGrid& v, const ImageGrid& y) {
    double q = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) q += (y[i] - v[i]) * (y[i] - v[i]);
    return regularizer_value(reg, y) + q / (2.0 * step);
}

} // namespace

TEST_CASE("prox: l1 examples") {
    const Regularizer reg{RegularizerKind::l1, 1.0};
    const ImageGrid y = prox(reg, 2.0, row({5.0, -1.0, -3.5, 2.0}));
    CHECK(y == row({3.0, 0.0, -1.5, 0.0}));
    CHECK(soft_threshold(5.0, 2.0) == 3.0);
    CHECK(soft_threshold(-1.0, 2.0) == 0.0);
    CHECK(soft_threshold(-7.0, 2.0) == -5.0);
}

TEST_CASE("prox: tv examples") {
    const Regularizer reg{RegularizerKind::tv1d, 1.0};
    const ImageGrid a = prox(reg, 0.2, row({0.0, 1.0}));
    CHECK(a[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(0.8).epsilon(1e-14));
    const ImageGrid b = prox(reg, 0.6, row({0.0, 1.0}));
    CHECK(b[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(0.5).epsilon(1e-14));
    const ImageGrid flat = row({0.7, 0.7, 0.7});
    CHECK(max_abs_diff(prox(reg, 3.0, flat), flat) <= 1e-15);
}

TEST_CASE("prox: none and lambda 0 are the identity") {
    const ImageGrid v = test::random_image(4, 5, 1, -2.0, 2.0);
    CHECK(prox({RegularizerKind::none, 3.0}, 0.7, v) == v);
    CHECK(prox({RegularizerKind::l1, 0.0}, 0.7, v) == v);
    CHECK(prox({RegularizerKind::tv1d, 0.0}, 0.7, v) == v);
}

TEST_CASE("prox: invalid arguments") {
    const ImageGrid v = test::random_image(2, 3, 2);
    CHECK_THROWS_AS(prox({RegularizerKind::l1, 1.0}, 0.0, v), ParameterError);
    CHECK_THROWS_AS(prox({RegularizerKind::l1, 1.0}, -1.0, v), ParameterError);
    CHECK_THROWS_AS(prox({RegularizerKind::l1, -1.0}, 1.0, v), ParameterError);
    ImageGrid bad = v;
    bad[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(prox({RegularizerKind::tv1d, 1.0}, 1.0, bad), NumericError);
    CHECK_THROWS_AS(prox({RegularizerKind::l1, 1.0}, 1.0, bad), NumericError);
    CHECK_THROWS_AS(parse_regularizer_kind("l2"), ParameterError);
}

TEST_CASE("regularizer values") {
    CHECK(tv_value(ImageGrid(3, 3, 0.4)) == 0.0);
    CHECK(tv_value(row({0.0, 1.0, 0.0})) == 2.0);
    CHECK(tv_value(ImageGrid(2, 2, std::vector<double>{0.0, 1.0, 5.0, 5.0})) == 1.0);
    CHECK(l1_value(row({-1.0, 2.0, -0.5})) == 3.5);
    CHECK(regularizer_value({RegularizerKind::tv1d, 0.5}, row({0.0, 1.0, 0.0})) == 1.0);
    CHECK(regularizer_value({RegularizerKind::none, 0.5}, row({0.0, 1.0, 0.0})) == 0.0);

    std::mt19937_64 rng(3);
    const auto v = test::random_vector(6, rng);
    double direct = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) direct += std::abs(v[i] - v[i - 1]);
    CHECK(tv_value(row(v)) == doctest::Approx(direct).epsilon(1e-15));
}

TEST_CASE("prox: output minimizes the prox objective under perturbation") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 1e-3);
    for (auto kind : {RegularizerKind::l1, RegularizerKind::tv1d}) {
        const Regularizer reg{kind, 0.8};
        for (int trial = 0; trial < 10; ++trial) {
            const ImageGrid v = test::random_image(3, 8, 50 + static_cast<std::uint64_t>(trial), -2.0, 2.0);
            const double step = 0.3;
            const ImageGrid y = prox(reg, step, v);
            const double best = prox_objective(reg, step, v, y);
            for (int p = 0; p < 200; ++p) {
                ImageGrid z = y;
                for (std::size_t i = 0; i < z.size(); ++i) z[i] += noise(rng);
                CHECK(prox_objective(reg, step, v, z) >= best - 1e-12);
            }
        }
    }
}

TEST_CASE("prox: non-expansive") {
    for (auto kind : {RegularizerKind::l1, RegularizerKind::tv1d}) {
        const Regularizer reg{kind, 0.5};
        for (std::uint64_t s = 0; s < 50; ++s) {
            const ImageGrid u = test::random_image(4, 9, 2 * s + 100, -2.0, 2.0);
            const ImageGrid v = test::random_image(4, 9, 2 * s + 101, -2.0, 2.0);
            const double lhs = squared_norm(prox(reg, 0.7, u) - prox(reg, 0.7, v));
            CHECK(lhs <= squared_norm(u - v) + 1e-12);
        }
    }
}

TEST_CASE("prox: soft threshold magnitude shrinks as lambda grows") {
    std::mt19937_64 rng(5);
    const auto v = test::random_vector(200, rng, -3.0, 3.0);
    for (double x : v) {
        double prev = std::abs(soft_threshold(x, 0.0));
        CHECK(prev == std::abs(x));
        for (double tau = 0.1; tau < 3.5; tau += 0.1) {
            const double cur = std::abs(soft_threshold(x, tau));
            CHECK(cur <= prev);
            prev = cur;
        }
    }
}

TEST_CASE("prox: tv matches the brute-force dual solve and preserves row means") {
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<std::size_t> len(1, 24);
    std::uniform_real_distribution<double> lam(0.01, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = len(rng);
        const auto v = test::random_vector(n, rng, -2.0, 2.0);
        const Regularizer reg{RegularizerKind::tv1d, lam(rng)};
        const ImageGrid y = prox(reg, 1.0, row(v));
        const auto ref = verification::brute_force_prox(reg, 1.0, v);
        double mean_v = 0.0, mean_y = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(y[i] - ref[i]) <= 1e-6);
            mean_v += v[i];
            mean_y += y[i];
        }
        CHECK(std::abs(mean_v - mean_y) / static_cast<double>(n) <= 1e-12);
    }
}

TEST_CASE("prox: l1 matches the brute-force grid search") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto v = test::random_vector(5, rng, -2.0, 2.0);
        const Regularizer reg{RegularizerKind::l1, 0.6};
        const ImageGrid y = prox(reg, 0.9, row(v));
        const auto ref = verification::brute_force_prox(reg, 0.9, v);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(y[i] - ref[i]) <= 1e-7);
    }
}

TEST_CASE("subgradient residual") {
    const ImageGrid v = row({5.0});
    const Regularizer l1{RegularizerKind::l1, 1.0};
    const ImageGrid y = prox(l1, 2.0, v);
    CHECK(y[0] == 3.0);
    CHECK(subgradient_residual(l1, 2.0, v, y)[0] == 1.0);

    const ImageGrid w = test::random_image(2, 6, 8);
    CHECK(max_abs(subgradient_residual({RegularizerKind::none, 1.0}, 0.5, w, prox({RegularizerKind::none, 1.0}, 0.5, w))) == 0.0);
    CHECK_THROWS_AS(subgradient_residual(l1, 0.0, w, w), ParameterError);

    // l1 residual lies in lambda * sign(y), and in [-lambda, lambda] where y = 0.
    const ImageGrid u = test::random_image(3, 7, 9, -1.0, 1.0);
    const ImageGrid yu = prox({RegularizerKind::l1, 0.4}, 0.5, u);
    const ImageGrid r = subgradient_residual({RegularizerKind::l1, 0.4}, 0.5, u, yu);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (yu[i] != 0.0) CHECK(r[i] == doctest::Approx(0.4 * (yu[i] > 0 ? 1.0 : -1.0)).epsilon(1e-12));
        else CHECK(std::abs(r[i]) <= 0.4 + 1e-12);
    }
}

TEST_CASE("subgradient residual: tv dual certificate") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        const auto v = test::random_vector(8, rng, -2.0, 2.0);
        const Regularizer reg{RegularizerKind::tv1d, 0.3};
        const double step = 0.8;
        const ImageGrid y = prox(reg, step, row(v));
        const ImageGrid r = subgradient_residual(reg, step, row(v), y);
        CHECK(verification::tv_dual_violation(y.values(), r.values(), reg.lambda) <= 1e-9);
    }
}
