#include "deblur/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deblur/errors.hpp"

namespace deblur {

ImageGrid::ImageGrid(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), data_(height * width, fill) {
    if (height == 0 || width == 0) {
        throw ParameterError("ImageGrid: height and width must be positive");
    }
}

ImageGrid::ImageGrid(std::size_t height, std::size_t width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
    if (height == 0 || width == 0) {
        throw ParameterError("ImageGrid: height and width must be positive");
    }
    if (data_.size() != height * width) {
        throw ParameterError("ImageGrid: data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(height) + "x" + std::to_string(width));
    }
}

void require_same_shape(const ImageGrid& a, const ImageGrid& b, const char* context) {
    if (!a.same_shape(b)) {
        throw ParameterError(std::string(context) + ": shape mismatch (" + std::to_string(a.height()) + "x" +
                             std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                             std::to_string(b.width()) + ")");
    }
}

ImageGrid& ImageGrid::operator+=(const ImageGrid& rhs) {
    require_same_shape(*this, rhs, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

ImageGrid& ImageGrid::operator-=(const ImageGrid& rhs) {
    require_same_shape(*this, rhs, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

ImageGrid& ImageGrid::operator*=(double s) noexcept {
    for (auto& v : data_) v *= s;
    return *this;
}

ImageGrid operator+(ImageGrid lhs, const ImageGrid& rhs) { return lhs += rhs; }
ImageGrid operator-(ImageGrid lhs, const ImageGrid& rhs) { return lhs -= rhs; }
ImageGrid operator*(double s, ImageGrid img) { return img *= s; }

double dot(const ImageGrid& a, const ImageGrid& b) {
    require_same_shape(a, b, "dot");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double squared_norm(const ImageGrid& a) {
    double acc = 0.0;
    for (double v : a.values()) acc += v * v;
    return acc;
}

double max_abs(const ImageGrid& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const ImageGrid& a, const ImageGrid& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double sum(const ImageGrid& a) {
    double acc = 0.0;
    for (double v : a.values()) acc += v;
    return acc;
}

bool all_finite(const ImageGrid& a) {
    return std::all_of(a.values().begin(), a.values().end(), [](double v) { return std::isfinite(v); });
}

ImageGrid clamped(ImageGrid img, double lo, double hi) {
    for (auto& v : img.values()) v = std::clamp(v, lo, hi);
    return img;
}

} // namespace deblur
