#include <doctest.h>

#include <cmath>
#include <random>

#include "deblur/blur_operator.hpp"
#include "deblur/errors.hpp"
#include "deblur/verification.hpp"
#include "helpers.hpp"

using namespace deblur;

TEST_CASE("operator: identity kernel forward is exact") {
    const ImageGrid x = test::random_image(7, 9, 1);
    const auto op = build_operator(make_identity_kernel(), 7, 9);
    CHECK(op->forward(x) == x);
    CHECK(op->adjoint(x) == x);
    CHECK(op->lipschitz() == doctest::Approx(1.0));
}

TEST_CASE("operator: kernel larger than the grid is rejected") {
    CHECK_THROWS_AS(build_operator(make_disk_kernel(7.0), 8, 8), ParameterError);
    CHECK_THROWS_AS(build_operator(make_gaussian_kernel(5, 1.0), 4, 16), ParameterError);
}

TEST_CASE("operator: shape mismatch is rejected") {
    const auto op = build_operator(make_disk_kernel(1.0), 8, 8);
    CHECK_THROWS_AS(op->forward(ImageGrid(8, 9)), ParameterError);
    CHECK_THROWS_AS(op->adjoint(ImageGrid(9, 8)), ParameterError);
}

TEST_CASE("operator: Lipschitz constant of a normalized nonnegative kernel is 1") {
    for (const auto& k : {make_disk_kernel(3.0), make_gaussian_kernel(9, 2.0), test::random_kernel(3, 5, 4)}) {
        const auto op = build_operator(k, 32, 32);
        CHECK(std::abs(op->lipschitz() - 1.0) <= 1e-9);
    }
}

TEST_CASE("operator: constant image is preserved") {
    const auto op = build_operator(make_disk_kernel(4.0), 24, 20);
    const ImageGrid x(24, 20, 0.3);
    CHECK(max_abs_diff(op->forward(x), x) <= 1e-12);
}

TEST_CASE("operator: FFT convolution matches direct circular convolution") {
    std::uint64_t seed = 100;
    for (std::size_t ky = 1; ky <= 5; ++ky) {
        for (std::size_t kx = 1; kx <= 5; kx += 2) {
            const Kernel k = test::random_kernel(ky, kx, seed++);
            for (std::size_t h = 5; h <= 12; h += 3) {
                for (std::size_t w = 5; w <= 12; w += 2) {
                    const auto op = build_operator(k, h, w);
                    const ImageGrid x = test::random_image(h, w, seed++, -1.0, 1.0);
                    CHECK(max_abs_diff(op->forward(x), test::direct_convolution(k, x)) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("operator: adjoint identity over random pairs") {
    const auto op = build_operator(test::random_kernel(4, 3, 9), 17, 12);
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const ImageGrid x = test::random_image(17, 12, 2 * s, -1.0, 1.0);
        const ImageGrid y = test::random_image(17, 12, 2 * s + 1, -1.0, 1.0);
        const double lhs = dot(op->forward(x), y), rhs = dot(x, op->adjoint(y));
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("operator: symmetric kernel makes adjoint equal forward") {
    const auto op = build_operator(make_gaussian_kernel(5, 1.2), 16, 16);
    const ImageGrid x = test::random_image(16, 16, 5);
    CHECK(max_abs_diff(op->adjoint(x), op->forward(x)) <= 1e-12);
}

TEST_CASE("grad_f: examples") {
    const auto op = build_operator(make_disk_kernel(2.0), 12, 12);
    const ImageGrid x = test::random_image(12, 12, 8);
    CHECK(max_abs(grad_f(*op, op->forward(x), x)) <= 1e-12);

    const auto id = build_operator(make_identity_kernel(), 12, 12);
    CHECK(max_abs_diff(grad_f(*id, ImageGrid(12, 12), x), x) == 0.0);

    const ImageGrid b = test::random_image(12, 12, 9);
    const Eigen::MatrixXd A = verification::dense_materialize(*op);
    const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.values().data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.values().data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::VectorXd expected = A.transpose() * (A * xv - bv);
    const ImageGrid g = grad_f(*op, b, x);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(g[i] - expected(static_cast<Eigen::Index>(i))) <= 1e-12);
}

TEST_CASE("weighting: n = 1 returns the input bit for bit") {
    const auto op = build_operator(make_disk_kernel(2.0), 16, 16);
    const ImageGrid g = test::random_image(16, 16, 10, -1.0, 1.0);
    CHECK(op->apply_weighting({1, 0.0}, g, WeightingPath::horner) == g);
    CHECK(op->apply_weighting({1, 0.0}, g, WeightingPath::spectral) == g);
}

TEST_CASE("weighting: n = 2 with M = I/2 scales by 1.5") {
    const auto op = build_operator(make_kernel(1, 1, {std::sqrt(0.5)}), 6, 6);
    const ImageGrid g = test::random_image(6, 6, 11, -1.0, 1.0);
    for (auto path : {WeightingPath::horner, WeightingPath::spectral}) {
        const ImageGrid out = op->apply_weighting({2, 1.0}, g, path);
        CHECK(max_abs_diff(out, 1.5 * g) <= 1e-15);
    }
}

TEST_CASE("weighting: Horner, spectral and dense agree") {
    const auto op = build_operator(test::random_kernel(3, 3, 12), 16, 16);
    for (unsigned n : {1u, 2u, 4u, 8u, 14u}) {
        const WeightingSpec spec{n, 0.0};
        const Eigen::MatrixXd dense = verification::dense_weighting(*op, spec);
        const double scale = dense.cwiseAbs().maxCoeff();
        for (auto path : {WeightingPath::horner, WeightingPath::spectral}) {
            const Eigen::MatrixXd probe = verification::probe_weighting(*op, spec, path);
            CHECK((probe - dense).cwiseAbs().maxCoeff() / scale <= 1e-10);
        }
    }
}

TEST_CASE("weighting: scalar response and coefficients") {
    CHECK(BlurOperator::weighting_response(5, 0.0) == 5.0);
    CHECK(BlurOperator::weighting_response(5, 1.0) == 1.0);
    CHECK(BlurOperator::weighting_response(3, 1e-12) == doctest::Approx(3.0));
    CHECK(BlurOperator::weighting_response(2, 0.5) == doctest::Approx(1.5));
    CHECK(weighting_coefficients(4) == std::vector<double>{4.0, -6.0, 4.0, -1.0});
    const auto op = build_operator(make_disk_kernel(1.0), 8, 8);
    CHECK_THROWS_AS(op->apply_weighting({0, 0.0}, ImageGrid(8, 8)), ParameterError);
}

TEST_CASE("weighted gradient equals W_n applied to grad f") {
    const auto op = build_operator(make_gaussian_kernel(5, 1.5), 16, 16);
    const ImageGrid x = test::random_image(16, 16, 13);
    const ImageGrid b = test::random_image(16, 16, 14);
    const Spectrum b_hat = op->analyze(b);
    for (unsigned n : {1u, 3u, 12u}) {
        const WeightingSpec spec{n, 0.0};
        const ImageGrid expected = op->apply_weighting(spec, grad_f(*op, b, x), WeightingPath::horner);
        CHECK(max_abs_diff(op->weighted_gradient(x, b_hat, spec), expected) <= 1e-12);
    }
}
