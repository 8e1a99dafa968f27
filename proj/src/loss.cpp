#include "eagle/loss.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "eagle/imagecore.hpp"
#include "eagle/spectral.hpp"

namespace eagle {

namespace {

void require_loss_inputs(const Image& rec, const Image& gt, const EagleConfig& cfg,
                         const char* what) {
    require_same_shape(rec, gt, what);
    if (cfg.patch_size < 1) {
        throw ParameterError(std::string(what) + ": patch size must be >= 1");
    }
    if (rec.width % cfg.patch_size != 0) {
        throw DimensionError(std::string(what) + ": width " + std::to_string(rec.width) +
                             " not divisible by patch size " + std::to_string(cfg.patch_size));
    }
    if (rec.height % cfg.patch_size != 0) {
        throw DimensionError(std::string(what) + ": height " + std::to_string(rec.height) +
                             " not divisible by patch size " + std::to_string(cfg.patch_size));
    }
    if (!(cfg.kappa >= 0.0)) {
        throw ParameterError(std::string(what) + ": cutoff must be >= 0");
    }
    if (!(cfg.lambda_weight >= 0.0)) {
        throw ParameterError(std::string(what) + ": loss weight must be >= 0");
    }
}

// image-pixel cutoff expressed in cycles per variance-map sample
double map_cutoff(const EagleConfig& cfg) { return cfg.kappa * cfg.patch_size; }

struct AxisForward {
    Image gradient;        // Scharr gradient map
    ComplexSpectrum spec;  // DFT of its patch-variance map
    MagnitudeSpectrum mag; // weighted magnitudes
};

AxisForward forward_axis(const Image& img, const Kernel3& kernel, int n,
                         const HighPassWeights& weights) {
    AxisForward out;
    out.gradient = convolve_same(img, kernel);
    const VarianceMap var = unfold_variance(out.gradient, n);
    out.spec = dft2(var);
    out.mag.width = var.width;
    out.mag.height = var.height;
    out.mag.values.resize(out.spec.size());
    for (std::size_t i = 0; i < out.spec.size(); ++i) {
        out.mag.values[i] = weights.weights[i] * std::abs(out.spec.values[i]);
    }
    return out;
}

double l1_mean(const MagnitudeSpectrum& a, const MagnitudeSpectrum& b) {
    // Per-row partial sums accumulated in index order; result does not depend
    // on the thread count.
    std::vector<double> row_sums(a.height, 0.0);
#pragma omp parallel for
    for (int u = 0; u < a.height; ++u) {
        double acc = 0.0;
        for (int v = 0; v < a.width; ++v) acc += std::abs(a.at(u, v) - b.at(u, v));
        row_sums[u] = acc;
    }
    double total = 0.0;
    for (double s : row_sums) total += s;
    return total / static_cast<double>(a.size());
}

double max_abs(const MagnitudeSpectrum& m) {
    double peak = 0.0;
    for (double v : m.values) peak = std::max(peak, std::abs(v));
    return peak;
}

// d(variance)/d(gradient_map): 2*(x - patch_mean)/n^2, scaled by the incoming
// per-patch gradient and scattered back over the patch entries.
Image variance_backward(const Image& gradient_map, const std::vector<double>& grad_var,
                        int var_width, int var_height, int n) {
    Image out(gradient_map.width, gradient_map.height);
    const double inv_count = 1.0 / (static_cast<double>(n) * n);
#pragma omp parallel for
    for (int bi = 0; bi < var_height; ++bi) {
        for (int bj = 0; bj < var_width; ++bj) {
            double mean = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) mean += gradient_map.at(bi * n + i, bj * n + j);
            mean *= inv_count;
            const double g = grad_var[static_cast<std::size_t>(bi) * var_width + bj];
            const double scale = 2.0 * inv_count * g;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    out.at(bi * n + i, bj * n + j) =
                        scale * (gradient_map.at(bi * n + i, bj * n + j) - mean);
                }
            }
        }
    }
    return out;
}

Image mse_gradient(const Image& rec, const Image& gt) {
    Image out(rec.width, rec.height);
    const double scale = 2.0 / static_cast<double>(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
        out.samples[i] = scale * (rec.samples[i] - gt.samples[i]);
    }
    return out;
}

double mse_value(const Image& rec, const Image& gt) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) {
        const double d = rec.samples[i] - gt.samples[i];
        acc += d * d;
    }
    return acc / static_cast<double>(rec.size());
}

} // namespace

double eagle_loss(const Image& rec, const Image& gt, const EagleConfig& cfg) {
    require_loss_inputs(rec, gt, cfg, "eagle_loss");
    const int n = cfg.patch_size;
    const HighPassWeights weights =
        gaussian_highpass(rec.width / n, rec.height / n, map_cutoff(cfg));
    double loss = 0.0;
    for (const Kernel3* kernel : {&scharr_kernel_x(), &scharr_kernel_y()}) {
        const AxisForward a = forward_axis(rec, *kernel, n, weights);
        const AxisForward b = forward_axis(gt, *kernel, n, weights);
        loss += l1_mean(a.mag, b.mag);
    }
    return loss;
}

Image eagle_loss_gradient(const Image& rec, const Image& gt, const EagleConfig& cfg) {
    require_loss_inputs(rec, gt, cfg, "eagle_loss_gradient");
    const int n = cfg.patch_size;
    const int vw = rec.width / n;
    const int vh = rec.height / n;
    const HighPassWeights weights = gaussian_highpass(vw, vh, map_cutoff(cfg));
    const double num_bins = static_cast<double>(vw) * vh;

    Image grad(rec.width, rec.height);
    for (const Kernel3* kernel : {&scharr_kernel_x(), &scharr_kernel_y()}) {
        const AxisForward a = forward_axis(rec, *kernel, n, weights);
        const AxisForward b = forward_axis(gt, *kernel, n, weights);

        // Floating-point-robust subgradient selections: the L1 sign and the
        // modulus direction are zeroed below a tolerance tied to the data scale.
        const double sign_tol = 1e-12 * std::max(max_abs(a.mag), max_abs(b.mag));
        double spec_peak = 0.0;
        for (const auto& z : a.spec.values) spec_peak = std::max(spec_peak, std::abs(z));
        const double modulus_tol = 1e-14 * spec_peak;

        ComplexSpectrum cotangent(vw, vh);
        for (std::size_t i = 0; i < cotangent.size(); ++i) {
            const double diff = a.mag.values[i] - b.mag.values[i];
            double sign = 0.0;
            if (diff > sign_tol) sign = 1.0;
            else if (diff < -sign_tol) sign = -1.0;
            const double modulus = std::abs(a.spec.values[i]);
            if (sign == 0.0 || modulus <= modulus_tol) {
                cotangent.values[i] = {0.0, 0.0};
            } else {
                const double scale = sign * weights.weights[i] / (num_bins * modulus);
                cotangent.values[i] = scale * std::conj(a.spec.values[i]);
            }
        }

        // Adjoint of the DFT stage: forward transform of the conjugate-scaled
        // cotangent, real part taken per spatial bin.
        const ComplexSpectrum back = dft2c(cotangent);
        std::vector<double> grad_var(back.size());
        for (std::size_t i = 0; i < back.size(); ++i) grad_var[i] = back.values[i].real();

        const Image grad_gradient_map = variance_backward(a.gradient, grad_var, vw, vh, n);
        const Image grad_axis = convolve_same_adjoint(grad_gradient_map, *kernel);
        for (std::size_t i = 0; i < grad.size(); ++i) grad.samples[i] += grad_axis.samples[i];
    }
    return grad;
}

LossBreakdown combined_loss(const Image& rec, const Image& gt, const EagleConfig& cfg) {
    require_loss_inputs(rec, gt, cfg, "combined_loss");
    LossBreakdown out;
    out.mse_term = mse_value(rec, gt);
    out.eagle_term = eagle_loss(rec, gt, cfg);
    out.total = out.mse_term + cfg.lambda_weight * out.eagle_term;
    return out;
}

Image combined_loss_gradient(const Image& rec, const Image& gt, const EagleConfig& cfg) {
    require_loss_inputs(rec, gt, cfg, "combined_loss_gradient");
    Image grad = mse_gradient(rec, gt);
    if (cfg.lambda_weight == 0.0) return grad;
    const Image eagle_grad = eagle_loss_gradient(rec, gt, cfg);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        grad.samples[i] += cfg.lambda_weight * eagle_grad.samples[i];
    }
    return grad;
}

double tv_value(const Image& image) {
    require_valid(image, "tv_value");
    if (image.width < 2 || image.height < 2) {
        throw DimensionError("tv_value: image must be at least 2x2");
    }
    std::vector<double> row_sums(image.height, 0.0);
#pragma omp parallel for
    for (int r = 0; r < image.height; ++r) {
        double acc = 0.0;
        for (int c = 0; c + 1 < image.width; ++c) {
            acc += std::abs(image.at(r, c + 1) - image.at(r, c));
        }
        if (r + 1 < image.height) {
            for (int c = 0; c < image.width; ++c) {
                acc += std::abs(image.at(r + 1, c) - image.at(r, c));
            }
        }
        row_sums[r] = acc;
    }
    double total = 0.0;
    for (double s : row_sums) total += s;
    return total;
}

Image tv_gradient(const Image& image) {
    require_valid(image, "tv_gradient");
    if (image.width < 2 || image.height < 2) {
        throw DimensionError("tv_gradient: image must be at least 2x2");
    }
    Image grad(image.width, image.height);
    auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c + 1 < image.width; ++c) {
            const double s = sgn(image.at(r, c + 1) - image.at(r, c));
            grad.at(r, c + 1) += s;
            grad.at(r, c) -= s;
        }
    }
    for (int r = 0; r + 1 < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            const double s = sgn(image.at(r + 1, c) - image.at(r, c));
            grad.at(r + 1, c) += s;
            grad.at(r, c) -= s;
        }
    }
    return grad;
}

} // namespace eagle
