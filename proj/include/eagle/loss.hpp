#pragma once

#include "eagle/image.hpp"

namespace eagle {

/// Parameters of the spectral loss and of the combined training objective.
/// kappa is the high-pass cutoff in cycles per image pixel; one variance-map
/// sample spans patch_size pixels, so the weight grid is evaluated at
/// patch_size * kappa cycles per map sample.
struct EagleConfig {
    int patch_size = 3;
    double kappa = 0.3;
    double lambda_weight = 1e-3;
};

struct LossBreakdown {
    double total = 0.0;
    double mse_term = 0.0;
    double eagle_term = 0.0;
};

/// Spectral loss between two images: mean-normalized L1 distance between the
/// high-pass-weighted DFT magnitudes of the patch-variance maps of their
/// Scharr gradient maps, summed over both gradient axes.
double eagle_loss(const Image& rec, const Image& gt, const EagleConfig& cfg);

/// Exact gradient of eagle_loss with respect to every pixel of rec.
/// Subgradient conventions: d|z| is 0 at z = 0 and the L1 sign is 0 where the
/// spectra agree (both tested against the spectrum scale, not exact zero, so
/// that rec == gt + const yields an exactly zero gradient in floating point).
Image eagle_loss_gradient(const Image& rec, const Image& gt, const EagleConfig& cfg);

/// mse + lambda * eagle, with mse the mean squared pixel difference.
LossBreakdown combined_loss(const Image& rec, const Image& gt, const EagleConfig& cfg);

Image combined_loss_gradient(const Image& rec, const Image& gt, const EagleConfig& cfg);

/// Anisotropic total variation: sum of |forward differences| along both axes.
double tv_value(const Image& image);

/// Subgradient of tv_value with sign(0) = 0.
Image tv_gradient(const Image& image);

} // namespace eagle
