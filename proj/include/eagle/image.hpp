#pragma once

#include <cstddef>
#include <vector>

#include "eagle/errors.hpp"

namespace eagle {

/// Dense row-major grid of real intensity samples.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> samples;

    Image() = default;
    Image(int w, int h, double fill = 0.0)
        : width(w), height(h),
          samples(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    double& at(int r, int c) { return samples[static_cast<std::size_t>(r) * width + c]; }
    double at(int r, int c) const { return samples[static_cast<std::size_t>(r) * width + c]; }
    std::size_t size() const { return samples.size(); }
};

/// Throws DimensionError unless dimensions are positive and match the sample count.
void require_valid(const Image& img, const char* what);

/// Throws DimensionError unless both images have identical dimensions.
void require_same_shape(const Image& a, const Image& b, const char* what);

bool all_finite(const Image& img);

Image transpose(const Image& img);

/// Largest centered crop whose sides are multiples of n.
Image center_crop_multiple(const Image& img, int n);

double min_sample(const Image& img);
double max_sample(const Image& img);

} // namespace eagle
