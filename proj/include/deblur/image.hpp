#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace deblur {

/// Row-major real raster. Carries the unknown image, the observation and
/// every intermediate iterate. Intensities are expected in [0, 1] after
/// ingestion, but nothing here clamps.
class ImageGrid {
public:
    ImageGrid() = default;
    ImageGrid(std::size_t height, std::size_t width, double fill = 0.0);
    ImageGrid(std::size_t height, std::size_t width, std::vector<double> data);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * width_ + col]; }
    double operator()(std::size_t row, std::size_t col) const noexcept { return data_[row * width_ + col]; }
    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }
    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * width_, width_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * width_, width_}; }

    bool same_shape(const ImageGrid& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }

    ImageGrid& operator+=(const ImageGrid& rhs);
    ImageGrid& operator-=(const ImageGrid& rhs);
    ImageGrid& operator*=(double s) noexcept;

    friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<double> data_;
};

ImageGrid operator+(ImageGrid lhs, const ImageGrid& rhs);
ImageGrid operator-(ImageGrid lhs, const ImageGrid& rhs);
ImageGrid operator*(double s, ImageGrid img);

/// Throws ParameterError naming `context` when shapes differ.
void require_same_shape(const ImageGrid& a, const ImageGrid& b, const char* context);

double dot(const ImageGrid& a, const ImageGrid& b);
double squared_norm(const ImageGrid& a);
double max_abs(const ImageGrid& a);
double max_abs_diff(const ImageGrid& a, const ImageGrid& b);
double sum(const ImageGrid& a);
bool all_finite(const ImageGrid& a);

/// Clamps every entry into [lo, hi].
ImageGrid clamped(ImageGrid img, double lo = 0.0, double hi = 1.0);

} // namespace deblur
