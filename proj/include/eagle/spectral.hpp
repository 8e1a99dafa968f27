#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "eagle/imagecore.hpp"

namespace eagle {

/// Unshifted 2D spectrum, DC at index (0,0), row-major over (u, v).
struct ComplexSpectrum {
    int width = 0;
    int height = 0;
    std::vector<std::complex<double>> values;

    ComplexSpectrum() = default;
    ComplexSpectrum(int w, int h)
        : width(w), height(h),
          values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {}

    std::complex<double>& at(int u, int v) {
        return values[static_cast<std::size_t>(u) * width + v];
    }
    std::complex<double> at(int u, int v) const {
        return values[static_cast<std::size_t>(u) * width + v];
    }
    std::size_t size() const { return values.size(); }
};

/// Unnormalized forward 2D DFT:
/// X[u,v] = sum_{r,c} x[r,c] * exp(-2*pi*i*(u*r/H + v*c/W)).
ComplexSpectrum dft2(int width, int height, std::span<const double> samples);
ComplexSpectrum dft2(const VarianceMap& grid);
ComplexSpectrum dft2(const Image& grid);

/// Same transform applied to a complex grid.
ComplexSpectrum dft2c(const ComplexSpectrum& grid);

/// Radial Gaussian high-pass weights on the unshifted spectrum layout.
struct HighPassWeights {
    int width = 0;
    int height = 0;
    std::vector<double> weights;
    double kappa = 0.0;

    double& at(int u, int v) { return weights[static_cast<std::size_t>(u) * width + v]; }
    double at(int u, int v) const { return weights[static_cast<std::size_t>(u) * width + v]; }
};

/// Weight per bin: 1 - exp(-(sqrt(fx^2 + fy^2) - kappa)^2 / 2), with fx, fy the
/// signed wrapped frequencies in cycles per sample. kappa must be >= 0.
HighPassWeights gaussian_highpass(int width, int height, double kappa);

/// Nonnegative high-pass-weighted DFT magnitudes.
struct MagnitudeSpectrum {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double& at(int u, int v) { return values[static_cast<std::size_t>(u) * width + v]; }
    double at(int u, int v) const { return values[static_cast<std::size_t>(u) * width + v]; }
    std::size_t size() const { return values.size(); }
};

/// Elementwise weights * |dft2(grid)|.
MagnitudeSpectrum magnitude_spectrum(const VarianceMap& grid, const HighPassWeights& weights);

/// Signed wrapped frequency of bin k on an axis of length n, cycles per sample.
inline double wrapped_frequency(int k, int n) {
    return (2 * k < n) ? static_cast<double>(k) / n : static_cast<double>(k - n) / n;
}

/// In-place radix-2 FFT; size must be a power of two. Inverse applies the 1/M factor.
void fft_pow2(std::vector<std::complex<double>>& data, bool inverse);

/// Smallest power of two >= 2*n; padded length used for detector-row filtering.
int fft_pad_size(int n);

} // namespace eagle
