#include "eagle/tomo.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "eagle/rng.hpp"
#include "eagle/spectral.hpp"

namespace eagle {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRayStep = 0.5; // pixels

Geometry require_consistent(const Sinogram& sino, const Geometry& geom, const char* what) {
    if (sino.geometry.num_angles != geom.num_angles ||
        sino.geometry.num_detectors != geom.num_detectors) {
        throw DimensionError(std::string(what) + ": sinogram geometry " +
                             std::to_string(sino.geometry.num_angles) + "x" +
                             std::to_string(sino.geometry.num_detectors) +
                             " does not match given geometry " + std::to_string(geom.num_angles) +
                             "x" + std::to_string(geom.num_detectors));
    }
    const std::size_t expected =
        static_cast<std::size_t>(geom.num_angles) * geom.num_detectors;
    if (sino.values.size() != expected) {
        throw DimensionError(std::string(what) + ": sinogram value count mismatch");
    }
    return geom;
}

// Visits the bilinear taps of every sample point along the (angle, offset)
// ray. Weights include the integration step length. The identical footprint
// is used by the forward projector and by the Kaczmarz row actions.
template <typename Fn>
inline void for_each_ray_sample(int size, double cos_a, double sin_a, double offset, Fn&& fn) {
    const double center = 0.5 * (size - 1);
    const double t_max = 0.5 * 1.41421356237309515 * size;
    const int steps = static_cast<int>(std::ceil(2.0 * t_max / kRayStep));
    for (int j = 0; j < steps; ++j) {
        const double t = -t_max + (j + 0.5) * kRayStep;
        const double col = offset * cos_a - t * sin_a + center;
        const double row = offset * sin_a + t * cos_a + center;
        if (col < 0.0 || col > size - 1 || row < 0.0 || row > size - 1) continue;
        int c0 = static_cast<int>(col);
        int r0 = static_cast<int>(row);
        if (c0 > size - 2) c0 = size - 2;
        if (r0 > size - 2) r0 = size - 2;
        const double fc = col - c0;
        const double fr = row - r0;
        fn(r0, c0, (1.0 - fr) * (1.0 - fc) * kRayStep);
        fn(r0, c0 + 1, (1.0 - fr) * fc * kRayStep);
        fn(r0 + 1, c0, fr * (1.0 - fc) * kRayStep);
        fn(r0 + 1, c0 + 1, fr * fc * kRayStep);
    }
}

double detector_offset(const Geometry& geom, int k) {
    return (k - 0.5 * (geom.num_detectors - 1)) * geom.detector_spacing;
}

// Density of the filtered rows handed to the backprojector; the spectrum is
// zero-extended so the rows come back sinc-interpolated on a finer grid.
constexpr int kDetectorUpsample = 4;

// Filters every angle row in the padded detector-frequency domain and returns
// the rows sampled at kDetectorUpsample points per detector bin.
std::vector<double> filter_rows(const Sinogram& sino, const Geometry& geom,
                                std::span<const double> response) {
    const int nd = geom.num_detectors;
    const int padded = fft_pad_size(nd);
    if (response.size() != static_cast<std::size_t>(padded / 2 + 1)) {
        throw DimensionError("filtered_backprojection: response length " +
                             std::to_string(response.size()) + " does not match padded grid " +
                             std::to_string(padded / 2 + 1));
    }
    const int fine_n = padded * kDetectorUpsample;
    const int fine_per_row = nd * kDetectorUpsample;
    std::vector<double> filtered(static_cast<std::size_t>(geom.num_angles) * fine_per_row);
#pragma omp parallel for
    for (int a = 0; a < geom.num_angles; ++a) {
        std::vector<std::complex<double>> line(padded, {0.0, 0.0});
        for (int k = 0; k < nd; ++k) line[k] = {sino.at(a, k), 0.0};
        fft_pow2(line, false);
        for (int m = 0; m < padded; ++m) {
            line[m] *= response[static_cast<std::size_t>(std::min(m, padded - m))];
        }
        // zero-extend the spectrum, splitting the Nyquist bin
        std::vector<std::complex<double>> fine(static_cast<std::size_t>(fine_n), {0.0, 0.0});
        for (int m = 0; m < padded / 2; ++m) fine[m] = line[m];
        for (int m = padded / 2 + 1; m < padded; ++m) fine[fine_n - (padded - m)] = line[m];
        fine[padded / 2] = 0.5 * line[padded / 2];
        fine[static_cast<std::size_t>(fine_n - padded / 2)] = 0.5 * line[padded / 2];
        fft_pow2(fine, true);
        for (int k = 0; k < fine_per_row; ++k) {
            filtered[static_cast<std::size_t>(a) * fine_per_row + k] =
                fine[k].real() * kDetectorUpsample;
        }
    }
    return filtered;
}

} // namespace

Geometry make_parallel_geometry(int num_angles, int num_detectors, double spacing) {
    if (num_angles < 1) throw ParameterError("make_parallel_geometry: num_angles must be >= 1");
    if (num_detectors < 1) {
        throw ParameterError("make_parallel_geometry: num_detectors must be >= 1");
    }
    if (!(spacing > 0.0)) throw ParameterError("make_parallel_geometry: spacing must be > 0");
    Geometry geom;
    geom.num_angles = num_angles;
    geom.num_detectors = num_detectors;
    geom.detector_spacing = spacing;
    geom.angles.resize(num_angles);
    for (int i = 0; i < num_angles; ++i) geom.angles[i] = kPi * i / num_angles;
    return geom;
}

int default_detector_count(int size) {
    int nd = static_cast<int>(std::ceil(size * 1.41421356237309515)) + 2;
    if (nd % 2 == 0) ++nd;
    return nd;
}

Sinogram radon_forward(const Image& image, const Geometry& geom) {
    require_valid(image, "radon_forward");
    if (image.width != image.height) {
        throw DimensionError("radon_forward: image must be square, got " +
                             std::to_string(image.width) + "x" + std::to_string(image.height));
    }
    Sinogram sino;
    sino.geometry = geom;
    sino.values.assign(static_cast<std::size_t>(geom.num_angles) * geom.num_detectors, 0.0);
#pragma omp parallel for
    for (int a = 0; a < geom.num_angles; ++a) {
        const double cos_a = std::cos(geom.angles[a]);
        const double sin_a = std::sin(geom.angles[a]);
        for (int k = 0; k < geom.num_detectors; ++k) {
            double acc = 0.0;
            for_each_ray_sample(image.width, cos_a, sin_a, detector_offset(geom, k),
                                [&](int r, int c, double w) { acc += w * image.at(r, c); });
            sino.at(a, k) = acc;
        }
    }
    return sino;
}

std::vector<double> ramp_response(const Geometry& geom) {
    // Band-limited ramp: transform of the discrete Ram-Lak impulse response
    //   h[0] = 1/(4 ds^2),  h[k odd] = -1/(pi k ds)^2,  h[k even] = 0,
    // scaled by ds so the result approximates |f| in cycles per unit length.
    const int padded = fft_pad_size(geom.num_detectors);
    const double ds = geom.detector_spacing;
    std::vector<std::complex<double>> impulse(static_cast<std::size_t>(padded), {0.0, 0.0});
    impulse[0] = {1.0 / (4.0 * ds * ds), 0.0};
    for (int k = 1; k <= padded / 2; k += 2) {
        const double v = -1.0 / (kPi * k * ds) / (kPi * k * ds);
        impulse[static_cast<std::size_t>(k)] = {v, 0.0};
        impulse[static_cast<std::size_t>(padded - k)] = {v, 0.0};
    }
    fft_pow2(impulse, false);
    std::vector<double> response(static_cast<std::size_t>(padded / 2 + 1));
    for (int m = 0; m <= padded / 2; ++m) {
        response[static_cast<std::size_t>(m)] = ds * impulse[static_cast<std::size_t>(m)].real();
    }
    return response;
}

Image filtered_backprojection(const Sinogram& sino, const Geometry& geom,
                              std::span<const double> response, int out_size) {
    require_consistent(sino, geom, "filtered_backprojection");
    if (out_size < 1) throw ParameterError("filtered_backprojection: out_size must be >= 1");
    const std::vector<double> filtered = filter_rows(sino, geom, response);

    const int nd = geom.num_detectors;
    const int fine_per_row = nd * kDetectorUpsample;
    const double fine_last = static_cast<double>(nd - 1) * kDetectorUpsample;
    const double center = 0.5 * (out_size - 1);
    const double det_center = 0.5 * (nd - 1);
    const double scale = kPi / geom.num_angles;

    std::vector<double> cos_a(geom.num_angles), sin_a(geom.num_angles);
    for (int a = 0; a < geom.num_angles; ++a) {
        cos_a[a] = std::cos(geom.angles[a]);
        sin_a[a] = std::sin(geom.angles[a]);
    }

    Image out(out_size, out_size);
#pragma omp parallel for
    for (int r = 0; r < out_size; ++r) {
        const double y = r - center;
        for (int c = 0; c < out_size; ++c) {
            const double x = c - center;
            double acc = 0.0;
            for (int a = 0; a < geom.num_angles; ++a) {
                const double s = x * cos_a[a] + y * sin_a[a];
                const double d = (s / geom.detector_spacing + det_center) * kDetectorUpsample;
                if (d < 0.0 || d > fine_last) continue;
                int d0 = static_cast<int>(d);
                if (d0 > fine_per_row - 2) d0 = fine_per_row - 2;
                const double f = d - d0;
                const double* row = &filtered[static_cast<std::size_t>(a) * fine_per_row];
                acc += (1.0 - f) * row[d0] + f * row[d0 + 1];
            }
            out.at(r, c) = scale * acc;
        }
    }
    return out;
}

Image fbp_reconstruct(const Sinogram& sino, const Geometry& geom, int out_size) {
    return filtered_backprojection(sino, geom, ramp_response(geom), out_size);
}

std::pair<Image, std::vector<SweepStats>> art_reconstruct(const Sinogram& sino,
                                                          const Geometry& geom,
                                                          const ArtConfig& cfg, int out_size,
                                                          const Image* reference) {
    require_consistent(sino, geom, "art_reconstruct");
    if (out_size < 1) throw ParameterError("art_reconstruct: out_size must be >= 1");
    if (cfg.num_sweeps < 1) throw ConfigError("art_reconstruct: num_sweeps must be >= 1");
    if (!(cfg.relaxation > 0.0) || !(cfg.relaxation < 2.0)) {
        throw ConfigError("art_reconstruct: relaxation must lie in (0, 2)");
    }
    if (!(cfg.reg_weight >= 0.0)) throw ConfigError("art_reconstruct: reg_weight must be >= 0");
    if (!(cfg.reg_step > 0.0)) throw ConfigError("art_reconstruct: reg_step must be > 0");
    const bool regularize = cfg.reg_kind != RegKind::none && cfg.reg_weight > 0.0;
    if (regularize && cfg.reg_kind == RegKind::eagle) {
        if (reference == nullptr) {
            throw ConfigError("art_reconstruct: eagle regularization requires a reference image");
        }
        if (reference->width != out_size || reference->height != out_size) {
            throw DimensionError("art_reconstruct: reference is " +
                                 std::to_string(reference->width) + "x" +
                                 std::to_string(reference->height) + ", output is " +
                                 std::to_string(out_size) + "x" + std::to_string(out_size));
        }
    }

    const int num_rays = geom.num_angles * geom.num_detectors;
    std::vector<double> cos_a(geom.num_angles), sin_a(geom.num_angles);
    for (int a = 0; a < geom.num_angles; ++a) {
        cos_a[a] = std::cos(geom.angles[a]);
        sin_a[a] = std::sin(geom.angles[a]);
    }

    // Row norms ||a_i||^2 with per-pixel weights accumulated first; sampled
    // taps overlap, so summing squared tap weights directly would be wrong.
    std::vector<double> row_norms(static_cast<std::size_t>(num_rays), 0.0);
    {
        std::vector<double> scratch(static_cast<std::size_t>(out_size) * out_size, 0.0);
        std::vector<int> touched;
        touched.reserve(static_cast<std::size_t>(8 * out_size));
        for (int i = 0; i < num_rays; ++i) {
            const int a = i / geom.num_detectors;
            const int k = i % geom.num_detectors;
            for_each_ray_sample(out_size, cos_a[a], sin_a[a], detector_offset(geom, k),
                                [&](int r, int c, double w) {
                                    const int idx = r * out_size + c;
                                    if (scratch[idx] == 0.0) touched.push_back(idx);
                                    scratch[idx] += w;
                                });
            double norm = 0.0;
            for (int idx : touched) {
                norm += scratch[idx] * scratch[idx];
                scratch[idx] = 0.0;
            }
            touched.clear();
            row_norms[i] = norm;
        }
    }

    std::vector<int> order(static_cast<std::size_t>(num_rays));
    std::iota(order.begin(), order.end(), 0);
    if (cfg.shuffle_seed.has_value()) {
        Rng rng(*cfg.shuffle_seed);
        for (int i = num_rays - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
            std::swap(order[i], order[j]);
        }
    }

    Image x(out_size, out_size);
    std::vector<SweepStats> log;
    log.reserve(static_cast<std::size_t>(cfg.num_sweeps));

    for (int sweep = 1; sweep <= cfg.num_sweeps; ++sweep) {
        for (int idx : order) {
            const double norm = row_norms[idx];
            if (norm <= 1e-30) continue;
            const int a = idx / geom.num_detectors;
            const int k = idx % geom.num_detectors;
            const double offset = detector_offset(geom, k);
            double dot = 0.0;
            for_each_ray_sample(out_size, cos_a[a], sin_a[a], offset,
                                [&](int r, int c, double w) { dot += w * x.at(r, c); });
            const double coeff = cfg.relaxation * (sino.at(a, k) - dot) / norm;
            for_each_ray_sample(out_size, cos_a[a], sin_a[a], offset,
                                [&](int r, int c, double w) { x.at(r, c) += coeff * w; });
        }

        if (regularize) {
            Image reg_grad = (cfg.reg_kind == RegKind::tv)
                                 ? tv_gradient(x)
                                 : eagle_loss_gradient(x, *reference, cfg.eagle_cfg);
            const double step = cfg.reg_step * cfg.reg_weight;
            for (std::size_t i = 0; i < x.size(); ++i) x.samples[i] -= step * reg_grad.samples[i];
        }
        if (cfg.nonnegativity) {
            for (double& v : x.samples) v = std::max(v, 0.0);
        }

        SweepStats stats;
        stats.sweep = sweep;
        const Sinogram fitted = radon_forward(x, geom);
        double residual = 0.0;
        for (std::size_t i = 0; i < fitted.values.size(); ++i) {
            const double d = fitted.values[i] - sino.values[i];
            residual += d * d;
        }
        stats.data_residual = residual;
        if (regularize) {
            stats.reg_value = (cfg.reg_kind == RegKind::tv)
                                  ? tv_value(x)
                                  : eagle_loss(x, *reference, cfg.eagle_cfg);
        }
        log.push_back(stats);
    }
    return {std::move(x), std::move(log)};
}

} // namespace eagle
