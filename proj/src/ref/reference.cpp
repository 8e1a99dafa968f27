#include "ref/reference.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace eagle::ref {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Explicitly reflect-padded copy, one-pixel border.
Image pad_reflect(const Image& img) {
    Image out(img.width + 2, img.height + 2);
    for (int r = -1; r <= img.height; ++r) {
        for (int c = -1; c <= img.width; ++c) {
            int rr = r;
            if (rr < 0) rr = 1;
            if (rr >= img.height) rr = img.height - 2;
            int cc = c;
            if (cc < 0) cc = 1;
            if (cc >= img.width) cc = img.width - 2;
            out.at(r + 1, c + 1) = img.at(rr, cc);
        }
    }
    return out;
}

} // namespace

Image convolve_same(const Image& image, const Kernel3& kernel) {
    if (image.width < 3 || image.height < 3) {
        throw DimensionError("ref::convolve_same: image must be at least 3x3");
    }
    const Image padded = pad_reflect(image);
    Image out(image.width, image.height);
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            double acc = 0.0;
            // correlation against the flipped kernel == true convolution
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    acc += kernel.at(2 - i, 2 - j) * padded.at(r + i, c + j);
                }
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

VarianceMap unfold_variance(const Image& gradient_map, int n) {
    if (n < 1) throw ParameterError("ref::unfold_variance: patch size must be >= 1");
    if (gradient_map.width % n != 0) {
        throw DimensionError("ref::unfold_variance: width not divisible by patch size");
    }
    if (gradient_map.height % n != 0) {
        throw DimensionError("ref::unfold_variance: height not divisible by patch size");
    }
    VarianceMap out(gradient_map.width / n, gradient_map.height / n);
    for (int bi = 0; bi < out.height; ++bi) {
        for (int bj = 0; bj < out.width; ++bj) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) sum += gradient_map.at(bi * n + i, bj * n + j);
            const double mean = sum / (n * n);
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const double d = gradient_map.at(bi * n + i, bj * n + j) - mean;
                    acc += d * d;
                }
            }
            out.at(bi, bj) = acc / (n * n);
        }
    }
    return out;
}

ComplexSpectrum dft2(int width, int height, std::span<const double> samples) {
    ComplexSpectrum out(width, height);
    for (int u = 0; u < height; ++u) {
        for (int v = 0; v < width; ++v) {
            std::complex<double> acc{0.0, 0.0};
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) {
                    const double phase =
                        -2.0 * kPi * (static_cast<double>(u) * r / height +
                                      static_cast<double>(v) * c / width);
                    acc += samples[static_cast<std::size_t>(r) * width + c] *
                           std::complex<double>{std::cos(phase), std::sin(phase)};
                }
            }
            out.at(u, v) = acc;
        }
    }
    return out;
}

ComplexSpectrum dft2c(const ComplexSpectrum& grid) {
    ComplexSpectrum out(grid.width, grid.height);
    for (int u = 0; u < grid.height; ++u) {
        for (int v = 0; v < grid.width; ++v) {
            std::complex<double> acc{0.0, 0.0};
            for (int r = 0; r < grid.height; ++r) {
                for (int c = 0; c < grid.width; ++c) {
                    const double phase =
                        -2.0 * kPi * (static_cast<double>(u) * r / grid.height +
                                      static_cast<double>(v) * c / grid.width);
                    acc += grid.at(r, c) * std::complex<double>{std::cos(phase), std::sin(phase)};
                }
            }
            out.at(u, v) = acc;
        }
    }
    return out;
}

HighPassWeights gaussian_highpass(int width, int height, double kappa) {
    if (kappa < 0.0) throw ParameterError("ref::gaussian_highpass: cutoff must be >= 0");
    HighPassWeights out;
    out.width = width;
    out.height = height;
    out.kappa = kappa;
    out.weights.resize(static_cast<std::size_t>(width) * height);
    for (int u = 0; u < height; ++u) {
        for (int v = 0; v < width; ++v) {
            const double fy = (2 * u < height) ? static_cast<double>(u) / height
                                               : static_cast<double>(u - height) / height;
            const double fx = (2 * v < width) ? static_cast<double>(v) / width
                                              : static_cast<double>(v - width) / width;
            const double d = std::sqrt(fx * fx + fy * fy) - kappa;
            out.at(u, v) = 1.0 - std::exp(-d * d / 2.0);
        }
    }
    return out;
}

MagnitudeSpectrum magnitude_spectrum(const VarianceMap& grid, const HighPassWeights& weights) {
    if (grid.width != weights.width || grid.height != weights.height) {
        throw DimensionError("ref::magnitude_spectrum: dimension mismatch");
    }
    const ComplexSpectrum spec = dft2(grid.width, grid.height, grid.values);
    MagnitudeSpectrum out;
    out.width = grid.width;
    out.height = grid.height;
    out.values.resize(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double re = spec.values[i].real();
        const double im = spec.values[i].imag();
        out.values[i] = weights.weights[i] * std::sqrt(re * re + im * im);
    }
    return out;
}

double eagle_loss(const Image& rec, const Image& gt, const EagleConfig& cfg) {
    if (rec.width != gt.width || rec.height != gt.height) {
        throw DimensionError("ref::eagle_loss: image shapes differ");
    }
    const Kernel3 kx{{-3.0, 0.0, 3.0, -10.0, 0.0, 10.0, -3.0, 0.0, 3.0}};
    const Kernel3 ky{{-3.0, -10.0, -3.0, 0.0, 0.0, 0.0, 3.0, 10.0, 3.0}};
    const int n = cfg.patch_size;
    // cutoff converted from cycles per image pixel to cycles per map sample
    const HighPassWeights w =
        ref::gaussian_highpass(rec.width / n, rec.height / n, cfg.kappa * n);
    const double num_bins = static_cast<double>(rec.width / n) * (rec.height / n);

    double loss = 0.0;
    for (const Kernel3* k : {&kx, &ky}) {
        const MagnitudeSpectrum m_rec =
            ref::magnitude_spectrum(ref::unfold_variance(ref::convolve_same(rec, *k), n), w);
        const MagnitudeSpectrum m_gt =
            ref::magnitude_spectrum(ref::unfold_variance(ref::convolve_same(gt, *k), n), w);
        double l1 = 0.0;
        for (std::size_t i = 0; i < m_rec.values.size(); ++i) {
            l1 += std::abs(m_rec.values[i] - m_gt.values[i]);
        }
        loss += l1 / num_bins;
    }
    return loss;
}

double ssim(const Image& a, const Image& b, double data_range) {
    if (a.width != b.width || a.height != b.height) {
        throw DimensionError("ref::ssim: image shapes differ");
    }
    if (a.width < 7 || a.height < 7) throw DimensionError("ref::ssim: images must be >= 7x7");
    if (!(data_range > 0.0)) throw ParameterError("ref::ssim: data_range must be > 0");
    const double c1 = (0.01 * data_range) * (0.01 * data_range);
    const double c2 = (0.03 * data_range) * (0.03 * data_range);
    const int win = 7;
    double total = 0.0;
    long count = 0;
    for (int r0 = 0; r0 + win <= a.height; ++r0) {
        for (int c0 = 0; c0 + win <= a.width; ++c0) {
            double ma = 0.0, mb = 0.0;
            for (int i = 0; i < win; ++i)
                for (int j = 0; j < win; ++j) {
                    ma += a.at(r0 + i, c0 + j);
                    mb += b.at(r0 + i, c0 + j);
                }
            ma /= win * win;
            mb /= win * win;
            double va = 0.0, vb = 0.0, cov = 0.0;
            for (int i = 0; i < win; ++i) {
                for (int j = 0; j < win; ++j) {
                    const double da = a.at(r0 + i, c0 + j) - ma;
                    const double db = b.at(r0 + i, c0 + j) - mb;
                    va += da * da;
                    vb += db * db;
                    cov += da * db;
                }
            }
            va /= win * win;
            vb /= win * win;
            cov /= win * win;
            const double numer = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
            const double denom = (ma * ma + mb * mb + c1) * (va + vb + c2);
            total += numer / denom;
            ++count;
        }
    }
    return total / count;
}

double psnr(const Image& a, const Image& b, double data_range) {
    if (a.width != b.width || a.height != b.height) {
        throw DimensionError("ref::psnr: image shapes differ");
    }
    double mse = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const double d = a.samples[i] - b.samples[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.samples.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(data_range * data_range / mse);
}

} // namespace eagle::ref
