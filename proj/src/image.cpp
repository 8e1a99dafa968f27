#include "eagle/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eagle {

void require_valid(const Image& img, const char* what) {
    if (img.width < 1 || img.height < 1) {
        throw DimensionError(std::string(what) + ": dimensions must be positive, got " +
                             std::to_string(img.width) + "x" + std::to_string(img.height));
    }
    const std::size_t expected =
        static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    if (img.samples.size() != expected) {
        throw DimensionError(std::string(what) + ": sample count " +
                             std::to_string(img.samples.size()) + " does not match " +
                             std::to_string(img.width) + "x" + std::to_string(img.height));
    }
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
    require_valid(a, what);
    require_valid(b, what);
    if (a.width != b.width || a.height != b.height) {
        throw DimensionError(std::string(what) + ": shape mismatch, " + std::to_string(a.width) +
                             "x" + std::to_string(a.height) + " vs " + std::to_string(b.width) +
                             "x" + std::to_string(b.height));
    }
}

bool all_finite(const Image& img) {
    return std::all_of(img.samples.begin(), img.samples.end(),
                       [](double v) { return std::isfinite(v); });
}

Image transpose(const Image& img) {
    require_valid(img, "transpose");
    Image out(img.height, img.width);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            out.at(c, r) = img.at(r, c);
        }
    }
    return out;
}

Image center_crop_multiple(const Image& img, int n) {
    require_valid(img, "center_crop_multiple");
    if (n < 1) throw ParameterError("center_crop_multiple: patch size must be >= 1");
    const int new_w = (img.width / n) * n;
    const int new_h = (img.height / n) * n;
    if (new_w == 0 || new_h == 0) {
        throw DimensionError("center_crop_multiple: image " + std::to_string(img.width) + "x" +
                             std::to_string(img.height) + " smaller than patch size " +
                             std::to_string(n));
    }
    const int off_c = (img.width - new_w) / 2;
    const int off_r = (img.height - new_h) / 2;
    Image out(new_w, new_h);
    for (int r = 0; r < new_h; ++r) {
        for (int c = 0; c < new_w; ++c) {
            out.at(r, c) = img.at(r + off_r, c + off_c);
        }
    }
    return out;
}

double min_sample(const Image& img) {
    return *std::min_element(img.samples.begin(), img.samples.end());
}

double max_sample(const Image& img) {
    return *std::max_element(img.samples.begin(), img.samples.end());
}

} // namespace eagle
