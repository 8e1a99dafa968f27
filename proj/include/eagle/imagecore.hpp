#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "eagle/image.hpp"

namespace eagle {

/// 3x3 convolution stencil, row-major taps.
struct Kernel3 {
    std::array<double, 9> taps{};
    double at(int i, int j) const { return taps[static_cast<std::size_t>(i) * 3 + j]; }
};

/// Horizontal derivative stencil [-3 0 3; -10 0 10; -3 0 3] (unnormalized Scharr taps).
const Kernel3& scharr_kernel_x();
/// Vertical derivative stencil, transpose of the horizontal one.
const Kernel3& scharr_kernel_y();

/// Same-size true convolution (kernel flipped) with reflect padding.
/// Reflection mirrors about the border pixel without repeating it.
Image convolve_same(const Image& image, const Kernel3& kernel);

/// Transpose of convolve_same as a linear map: scatters a gradient w.r.t. the
/// output back through the same taps and reflected indices.
Image convolve_same_adjoint(const Image& grad_output, const Kernel3& kernel);

/// (G_x, G_y) Scharr gradient maps of the image.
std::pair<Image, Image> scharr_gradients(const Image& image);

/// Grid of per-patch population variances; one entry per n x n patch.
struct VarianceMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    VarianceMap() = default;
    VarianceMap(int w, int h)
        : width(w), height(h),
          values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0) {}

    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }
    std::size_t size() const { return values.size(); }
};

/// Population variance (divide by n^2) of each non-overlapping n x n patch.
/// Both image dimensions must be exact multiples of n.
VarianceMap unfold_variance(const Image& gradient_map, int n);

/// Mirror index into [0, n) without repeating the border sample.
inline int reflect_index(int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
}

} // namespace eagle
