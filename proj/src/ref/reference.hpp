#pragma once

// Serial reference implementations written as literal nested loops, kept
// deliberately independent of the production kernels. Tests use them as
// oracles; the benchmark target compares both paths.

#include "eagle/image.hpp"
#include "eagle/imagecore.hpp"
#include "eagle/loss.hpp"
#include "eagle/spectral.hpp"

namespace eagle::ref {

Image convolve_same(const Image& image, const Kernel3& kernel);

VarianceMap unfold_variance(const Image& gradient_map, int n);

/// Direct O(N^2) double-sum DFT.
ComplexSpectrum dft2(int width, int height, std::span<const double> samples);
ComplexSpectrum dft2c(const ComplexSpectrum& grid);

HighPassWeights gaussian_highpass(int width, int height, double kappa);

MagnitudeSpectrum magnitude_spectrum(const VarianceMap& grid, const HighPassWeights& weights);

/// Full loss pipeline built only from the reference pieces above.
double eagle_loss(const Image& rec, const Image& gt, const EagleConfig& cfg);

/// Per-window two-pass SSIM with a 7x7 uniform window.
double ssim(const Image& a, const Image& b, double data_range);

double psnr(const Image& a, const Image& b, double data_range);

} // namespace eagle::ref
