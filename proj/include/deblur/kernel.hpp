#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace deblur {

/// Spatial blur kernel. Weights are row-major; the anchor is the tap that
/// lands on the output pixel when the kernel is wrapped onto the image grid.
struct Kernel {
    std::size_t size_y = 0;
    std::size_t size_x = 0;
    std::vector<double> weights;
    std::size_t anchor_y = 0;
    std::size_t anchor_x = 0;

    double operator()(std::size_t r, std::size_t c) const { return weights[r * size_x + c]; }
    double sum() const;
};

/// Uniform disk of the given radius, MATLAB fspecial('disk') layout: side
/// 2*ceil(radius - 0.5) + 1, each tap the exact fraction of its pixel covered
/// by the disk, then normalized.
Kernel make_disk_kernel(double radius);

/// Isotropic Gaussian, fspecial('gaussian', size, sigma) layout. Taps are
/// offset from (size-1)/2; the circular anchor is floor(size/2).
Kernel make_gaussian_kernel(std::size_t size, double sigma);

/// A delta kernel; build_operator on it is the identity map.
Kernel make_identity_kernel();

/// Arbitrary weights, anchored at (rows/2, cols/2). Not renormalized.
Kernel make_kernel(std::size_t size_y, std::size_t size_x, std::vector<double> weights);

/// Parses "disk:<r>", "gaussian:<size>,<sigma>" or "identity".
Kernel parse_kernel_spec(const std::string& spec);

/// Plain-text dump: a "# size_y size_x anchor_y anchor_x" line, then one
/// whitespace-separated row of weights per line.
void write_kernel_text(std::ostream& os, const Kernel& k);

} // namespace deblur
