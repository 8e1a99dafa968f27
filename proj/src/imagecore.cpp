#include "eagle/imagecore.hpp"

#include <string>

namespace eagle {

const Kernel3& scharr_kernel_x() {
    static const Kernel3 k{{-3.0, 0.0, 3.0, -10.0, 0.0, 10.0, -3.0, 0.0, 3.0}};
    return k;
}

const Kernel3& scharr_kernel_y() {
    static const Kernel3 k{{-3.0, -10.0, -3.0, 0.0, 0.0, 0.0, 3.0, 10.0, 3.0}};
    return k;
}

namespace {

void require_convolvable(const Image& img, const char* what) {
    require_valid(img, what);
    if (img.width < 3 || img.height < 3) {
        throw DimensionError(std::string(what) + ": image must be at least 3x3, got " +
                             std::to_string(img.width) + "x" + std::to_string(img.height));
    }
}

} // namespace

Image convolve_same(const Image& image, const Kernel3& kernel) {
    require_convolvable(image, "convolve_same");
    const int w = image.width;
    const int h = image.height;
    Image out(w, h);
#pragma omp parallel for
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int i = 0; i < 3; ++i) {
                const int rr = reflect_index(r + 1 - i, h);
                for (int j = 0; j < 3; ++j) {
                    const int cc = reflect_index(c + 1 - j, w);
                    acc += kernel.at(i, j) * image.at(rr, cc);
                }
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

Image convolve_same_adjoint(const Image& grad_output, const Kernel3& kernel) {
    require_convolvable(grad_output, "convolve_same_adjoint");
    const int w = grad_output.width;
    const int h = grad_output.height;
    Image grad_in(w, h);
    // Scatter with reflected indices; kept serial, the writes collide at borders.
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double g = grad_output.at(r, c);
            for (int i = 0; i < 3; ++i) {
                const int rr = reflect_index(r + 1 - i, h);
                for (int j = 0; j < 3; ++j) {
                    const int cc = reflect_index(c + 1 - j, w);
                    grad_in.at(rr, cc) += kernel.at(i, j) * g;
                }
            }
        }
    }
    return grad_in;
}

std::pair<Image, Image> scharr_gradients(const Image& image) {
    return {convolve_same(image, scharr_kernel_x()), convolve_same(image, scharr_kernel_y())};
}

VarianceMap unfold_variance(const Image& gradient_map, int n) {
    require_valid(gradient_map, "unfold_variance");
    if (n < 1) throw ParameterError("unfold_variance: patch size must be >= 1");
    if (gradient_map.width % n != 0) {
        throw DimensionError("unfold_variance: width " + std::to_string(gradient_map.width) +
                             " not divisible by patch size " + std::to_string(n));
    }
    if (gradient_map.height % n != 0) {
        throw DimensionError("unfold_variance: height " + std::to_string(gradient_map.height) +
                             " not divisible by patch size " + std::to_string(n));
    }
    const int bw = gradient_map.width / n;
    const int bh = gradient_map.height / n;
    const double inv_count = 1.0 / (static_cast<double>(n) * n);
    VarianceMap out(bw, bh);
#pragma omp parallel for
    for (int bi = 0; bi < bh; ++bi) {
        for (int bj = 0; bj < bw; ++bj) {
            double mean = 0.0;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    mean += gradient_map.at(bi * n + i, bj * n + j);
                }
            }
            mean *= inv_count;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const double d = gradient_map.at(bi * n + i, bj * n + j) - mean;
                    acc += d * d;
                }
            }
            out.at(bi, bj) = acc * inv_count;
        }
    }
    return out;
}

} // namespace eagle
