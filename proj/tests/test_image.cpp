#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "deblur/errors.hpp"
#include "deblur/image.hpp"
#include "deblur/image_io.hpp"
#include "deblur/noise.hpp"
#include "helpers.hpp"

using namespace deblur;

TEST_CASE("image grid construction and arithmetic") {
    ImageGrid a(2, 3, 1.5);
    CHECK(a.height() == 2);
    CHECK(a.width() == 3);
    CHECK(a.size() == 6);
    CHECK(sum(a) == doctest::Approx(9.0));
    CHECK_THROWS_AS(ImageGrid(2, 3, std::vector<double>(5)), ParameterError);

    ImageGrid b(2, 3, std::vector<double>{1, 2, 3, 4, 5, 6});
    CHECK(b(1, 0) == 4.0);
    const ImageGrid c = a + b;
    CHECK(c(1, 2) == 7.5);
    CHECK(dot(a, b) == doctest::Approx(31.5));
    CHECK(squared_norm(b) == doctest::Approx(91.0));
    CHECK(max_abs_diff(c, b) == 1.5);
    CHECK_THROWS_AS(a + ImageGrid(3, 2), ParameterError);

    ImageGrid d = b;
    d[0] = std::numeric_limits<double>::infinity();
    CHECK(all_finite(b));
    CHECK_FALSE(all_finite(d));
    const ImageGrid e = clamped(ImageGrid(1, 3, std::vector<double>{-1.0, 0.5, 2.0}));
    CHECK(e == ImageGrid(1, 3, std::vector<double>{0.0, 0.5, 1.0}));
}

TEST_CASE("noise: zero variance returns the input unchanged") {
    const ImageGrid x = test::random_image(16, 16, 3);
    CHECK(add_gaussian_noise(x, 0.0, 99) == x);
}

TEST_CASE("noise: sample variance matches the requested variance") {
    const ImageGrid zero(256, 256);
    const ImageGrid noisy = add_gaussian_noise(zero, 1e-4, 7);
    const double mean = sum(noisy) / static_cast<double>(noisy.size());
    double var = 0.0;
    for (std::size_t i = 0; i < noisy.size(); ++i) var += (noisy[i] - mean) * (noisy[i] - mean);
    var /= static_cast<double>(noisy.size() - 1);
    CHECK(var >= 0.8e-4);
    CHECK(var <= 1.2e-4);
}

TEST_CASE("noise: deterministic in the seed, rejects negative variance") {
    const ImageGrid x(32, 32, 0.5);
    CHECK(add_gaussian_noise(x, 1e-3, 11) == add_gaussian_noise(x, 1e-3, 11));
    CHECK_FALSE(add_gaussian_noise(x, 1e-3, 11) == add_gaussian_noise(x, 1e-3, 12));
    CHECK_THROWS_AS(add_gaussian_noise(x, -1e-4, 1), ParameterError);
}

TEST_CASE("image io: png and pgm round trips") {
    const auto dir = std::filesystem::path(TEST_SCRATCH_DIR) / "io";
    std::filesystem::create_directories(dir);
    ImageGrid img(5, 7);
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<double>((i * 37) % 256) / 255.0;

    write_png(dir / "a.png", img);
    CHECK(max_abs_diff(read_image(dir / "a.png"), img) <= 1e-15);
    write_pgm(dir / "a.pgm", img);
    CHECK(max_abs_diff(read_image(dir / "a.pgm"), img) <= 1e-15);
    write_pgm(dir / "b.pgm", img, true);
    CHECK(max_abs_diff(read_image(dir / "b.pgm"), img) <= 0.5 / 65535.0);

    CHECK_THROWS_AS(read_image(dir / "missing.png"), IoError);
    {
        std::ofstream junk(dir / "junk.png");
        junk << "not an image";
    }
    CHECK_THROWS_AS(read_image(dir / "junk.png"), IoError);
}
