#include "eagle/spectral.hpp"

#include <cmath>
#include <string>

namespace eagle {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// exp(-2*pi*i*m/L) for m in [0, L)
std::vector<std::complex<double>> twiddle_table(int length) {
    std::vector<std::complex<double>> tw(length);
    for (int m = 0; m < length; ++m) {
        const double phase = -2.0 * kPi * m / length;
        tw[m] = {std::cos(phase), std::sin(phase)};
    }
    return tw;
}

void naive_line(const std::complex<double>* in, std::complex<double>* out, int length,
                const std::vector<std::complex<double>>& tw) {
    for (int k = 0; k < length; ++k) {
        std::complex<double> acc{0.0, 0.0};
        std::size_t idx = 0;
        for (int j = 0; j < length; ++j) {
            acc += in[j] * tw[idx];
            idx += k;
            if (idx >= static_cast<std::size_t>(length)) idx -= length;
        }
        out[k] = acc;
    }
}

// Forward transform along rows, then columns, in place.
void transform_grid(ComplexSpectrum& grid) {
    const int w = grid.width;
    const int h = grid.height;

    if (is_pow2(w)) {
#pragma omp parallel for
        for (int r = 0; r < h; ++r) {
            std::vector<std::complex<double>> line(grid.values.begin() + static_cast<std::size_t>(r) * w,
                                                   grid.values.begin() + static_cast<std::size_t>(r + 1) * w);
            fft_pow2(line, false);
            for (int c = 0; c < w; ++c) grid.at(r, c) = line[c];
        }
    } else {
        const auto tw = twiddle_table(w);
#pragma omp parallel for
        for (int r = 0; r < h; ++r) {
            std::vector<std::complex<double>> line(w);
            naive_line(&grid.values[static_cast<std::size_t>(r) * w], line.data(), w, tw);
            for (int c = 0; c < w; ++c) grid.at(r, c) = line[c];
        }
    }

    if (is_pow2(h)) {
#pragma omp parallel for
        for (int c = 0; c < w; ++c) {
            std::vector<std::complex<double>> line(h);
            for (int r = 0; r < h; ++r) line[r] = grid.at(r, c);
            fft_pow2(line, false);
            for (int r = 0; r < h; ++r) grid.at(r, c) = line[r];
        }
    } else {
        const auto tw = twiddle_table(h);
#pragma omp parallel for
        for (int c = 0; c < w; ++c) {
            std::vector<std::complex<double>> line(h), out(h);
            for (int r = 0; r < h; ++r) line[r] = grid.at(r, c);
            naive_line(line.data(), out.data(), h, tw);
            for (int r = 0; r < h; ++r) grid.at(r, c) = out[r];
        }
    }
}

} // namespace

ComplexSpectrum dft2(int width, int height, std::span<const double> samples) {
    if (width < 1 || height < 1) {
        throw DimensionError("dft2: dimensions must be positive, got " + std::to_string(width) +
                             "x" + std::to_string(height));
    }
    if (samples.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw DimensionError("dft2: sample count does not match dimensions");
    }
    ComplexSpectrum grid(width, height);
    for (std::size_t i = 0; i < samples.size(); ++i) grid.values[i] = {samples[i], 0.0};
    transform_grid(grid);
    return grid;
}

ComplexSpectrum dft2(const VarianceMap& grid) { return dft2(grid.width, grid.height, grid.values); }

ComplexSpectrum dft2(const Image& grid) { return dft2(grid.width, grid.height, grid.samples); }

ComplexSpectrum dft2c(const ComplexSpectrum& grid) {
    if (grid.width < 1 || grid.height < 1) {
        throw DimensionError("dft2c: dimensions must be positive");
    }
    ComplexSpectrum out = grid;
    transform_grid(out);
    return out;
}

HighPassWeights gaussian_highpass(int width, int height, double kappa) {
    if (width < 1 || height < 1) {
        throw DimensionError("gaussian_highpass: dimensions must be positive");
    }
    if (!(kappa >= 0.0)) {
        throw ParameterError("gaussian_highpass: cutoff must be >= 0, got " +
                             std::to_string(kappa));
    }
    HighPassWeights out;
    out.width = width;
    out.height = height;
    out.kappa = kappa;
    out.weights.resize(static_cast<std::size_t>(width) * height);
    for (int u = 0; u < height; ++u) {
        const double fy = wrapped_frequency(u, height);
        for (int v = 0; v < width; ++v) {
            const double fx = wrapped_frequency(v, width);
            const double radius = std::sqrt(fx * fx + fy * fy);
            const double d = radius - kappa;
            out.at(u, v) = 1.0 - std::exp(-0.5 * d * d);
        }
    }
    return out;
}

MagnitudeSpectrum magnitude_spectrum(const VarianceMap& grid, const HighPassWeights& weights) {
    if (grid.width != weights.width || grid.height != weights.height) {
        throw DimensionError("magnitude_spectrum: grid " + std::to_string(grid.width) + "x" +
                             std::to_string(grid.height) + " vs weights " +
                             std::to_string(weights.width) + "x" + std::to_string(weights.height));
    }
    const ComplexSpectrum spec = dft2(grid);
    MagnitudeSpectrum out;
    out.width = grid.width;
    out.height = grid.height;
    out.values.resize(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        out.values[i] = weights.weights[i] * std::abs(spec.values[i]);
    }
    return out;
}

void fft_pow2(std::vector<std::complex<double>>& data, bool inverse) {
    const int n = static_cast<int>(data.size());
    if (!is_pow2(n)) throw ParameterError("fft_pow2: length must be a power of two");
    // bit reversal
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double step = (inverse ? 2.0 : -2.0) * kPi / len;
        const std::complex<double> wstep{std::cos(step), std::sin(step)};
        for (int i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (int k = 0; k < len / 2; ++k) {
                const std::complex<double> a = data[i + k];
                const std::complex<double> b = data[i + k + len / 2] * w;
                data[i + k] = a + b;
                data[i + k + len / 2] = a - b;
                w *= wstep;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / n;
        for (auto& v : data) v *= scale;
    }
}

int fft_pad_size(int n) {
    if (n < 1) throw ParameterError("fft_pad_size: n must be >= 1");
    int size = 1;
    while (size < 2 * n) size <<= 1;
    return size;
}

} // namespace eagle
