#include "eagle/tffilter.hpp"

#include <cmath>
#include <string>

#include "eagle/metrics.hpp"
#include "eagle/spectral.hpp"

namespace eagle {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_filter(const FilterCoefficients& fc, const char* what) {
    if (fc.coeffs.empty()) throw ParameterError(std::string(what) + ": needs >= 1 coefficient");
    if (fc.num_detectors < 1) {
        throw ParameterError(std::string(what) + ": num_detectors must be >= 1");
    }
}

struct DatasetLayout {
    int out_size = 0;
    Geometry geom;
};

DatasetLayout require_dataset(const std::vector<TrainSample>& dataset, const EagleConfig& cfg,
                              const char* what) {
    if (dataset.empty()) throw ConfigError(std::string(what) + ": dataset is empty");
    DatasetLayout layout;
    layout.geom = dataset.front().sino.geometry;
    layout.out_size = dataset.front().ground_truth.width;
    for (const TrainSample& s : dataset) {
        require_valid(s.ground_truth, what);
        if (s.ground_truth.width != s.ground_truth.height) {
            throw DimensionError(std::string(what) + ": ground truth images must be square");
        }
        if (s.ground_truth.width != layout.out_size) {
            throw ConfigError(std::string(what) + ": ground truth sizes differ across samples");
        }
        if (s.sino.geometry.num_angles != layout.geom.num_angles ||
            s.sino.geometry.num_detectors != layout.geom.num_detectors) {
            throw ConfigError(std::string(what) + ": sinogram geometries differ across samples");
        }
    }
    if (layout.out_size % cfg.patch_size != 0) {
        throw DimensionError(std::string(what) + ": image size " +
                             std::to_string(layout.out_size) + " not divisible by patch size " +
                             std::to_string(cfg.patch_size));
    }
    return layout;
}

// Cholesky solve of (A + ridge I) x = b for a symmetric positive semidefinite A.
std::vector<double> spd_solve(std::vector<double> a, int n, std::vector<double> b, double ridge) {
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + i] += ridge;
    for (int j = 0; j < n; ++j) {
        double d = a[static_cast<std::size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            const double v = a[static_cast<std::size_t>(j) * n + k];
            d -= v * v;
        }
        d = std::sqrt(std::max(d, 1e-300));
        a[static_cast<std::size_t>(j) * n + j] = d;
        for (int i = j + 1; i < n; ++i) {
            double v = a[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k) {
                v -= a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(j) * n + k];
            }
            a[static_cast<std::size_t>(i) * n + j] = v / d;
        }
    }
    for (int i = 0; i < n; ++i) {
        double v = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) v -= a[static_cast<std::size_t>(i) * n + k] * b[k];
        b[static_cast<std::size_t>(i)] = v / a[static_cast<std::size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double v = b[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k) v -= a[static_cast<std::size_t>(k) * n + i] * b[k];
        b[static_cast<std::size_t>(i)] = v / a[static_cast<std::size_t>(i) * n + i];
    }
    return b;
}

} // namespace

std::vector<double> filter_response(const FilterCoefficients& fc) {
    require_filter(fc, "filter_response");
    const int padded = fft_pad_size(fc.num_detectors);
    const int half = padded / 2;
    std::vector<double> response(static_cast<std::size_t>(half) + 1, 0.0);
    for (int m = 0; m <= half; ++m) {
        const double f_frac = static_cast<double>(m) / half; // f / f_max in [0, 1]
        double acc = 0.0;
        for (std::size_t k = 0; k < fc.coeffs.size(); ++k) {
            acc += fc.coeffs[k] * std::cos(kPi * static_cast<double>(k) * f_frac);
        }
        response[static_cast<std::size_t>(m)] = acc;
    }
    return response;
}

FilterCoefficients ramp_projection(int num_coeffs, int num_detectors, double spacing) {
    if (num_coeffs < 1) throw ParameterError("ramp_projection: num_coeffs must be >= 1");
    if (!(spacing > 0.0)) throw ParameterError("ramp_projection: spacing must be > 0");
    const double f_max = 0.5 / spacing;
    FilterCoefficients fc;
    fc.num_detectors = num_detectors;
    fc.coeffs.assign(static_cast<std::size_t>(num_coeffs), 0.0);
    // cosine series of |f| on [0, f_max]: f_max/2 - (4 f_max / pi^2) sum_{k odd} cos(pi k f/f_max)/k^2
    fc.coeffs[0] = 0.5 * f_max;
    for (int k = 1; k < num_coeffs; k += 2) {
        fc.coeffs[static_cast<std::size_t>(k)] =
            -4.0 * f_max / (kPi * kPi * static_cast<double>(k) * k);
    }
    return fc;
}

Image tf_fbp_reconstruct(const Sinogram& sino, const Geometry& geom,
                         const FilterCoefficients& fc, int out_size) {
    require_filter(fc, "tf_fbp_reconstruct");
    if (fc.num_detectors != geom.num_detectors) {
        throw DimensionError("tf_fbp_reconstruct: filter is for " +
                             std::to_string(fc.num_detectors) + " detectors, geometry has " +
                             std::to_string(geom.num_detectors));
    }
    return filtered_backprojection(sino, geom, filter_response(fc), out_size);
}

double high_frequency_energy_fraction(const Image& image) {
    require_valid(image, "high_frequency_energy_fraction");
    const ComplexSpectrum spec = dft2(image);
    double total = 0.0;
    double high = 0.0;
    for (int u = 0; u < spec.height; ++u) {
        const double fy = wrapped_frequency(u, spec.height);
        for (int v = 0; v < spec.width; ++v) {
            const double fx = wrapped_frequency(v, spec.width);
            const double energy = std::norm(spec.at(u, v));
            total += energy;
            if (fx * fx + fy * fy > 0.0625) high += energy; // radius > 0.25
        }
    }
    return total > 0.0 ? high / total : 0.0;
}

TrainResult train_filter(const std::vector<TrainSample>& dataset, const EagleConfig& cfg,
                         int epochs, double learning_rate, int num_coeffs) {
    const DatasetLayout layout = require_dataset(dataset, cfg, "train_filter");
    if (epochs < 0) throw ConfigError("train_filter: epochs must be >= 0");
    if (!(learning_rate >= 0.0)) throw ConfigError("train_filter: learning rate must be >= 0");
    if (num_coeffs < 1) throw ConfigError("train_filter: num_coeffs must be >= 1");

    const std::size_t num_samples = dataset.size();
    const std::size_t p = static_cast<std::size_t>(num_coeffs);

    // Per-sample reconstructions of every unit coefficient vector. The
    // reconstruction for arbitrary coefficients is their linear combination.
    std::vector<std::vector<Image>> basis(num_samples);
    for (std::size_t s = 0; s < num_samples; ++s) {
        basis[s].reserve(p);
        FilterCoefficients unit;
        unit.num_detectors = layout.geom.num_detectors;
        unit.coeffs.assign(p, 0.0);
        for (std::size_t k = 0; k < p; ++k) {
            unit.coeffs[k] = 1.0;
            basis[s].push_back(tf_fbp_reconstruct(dataset[s].sino, dataset[s].sino.geometry,
                                                  unit, layout.out_size));
            unit.coeffs[k] = 0.0;
        }
    }

    auto reconstruct = [&](std::size_t s, const std::vector<double>& coeffs) {
        Image img(layout.out_size, layout.out_size);
        for (std::size_t k = 0; k < p; ++k) {
            const double c = coeffs[k];
            if (c == 0.0) continue;
            const Image& b = basis[s][k];
            for (std::size_t i = 0; i < img.size(); ++i) img.samples[i] += c * b.samples[i];
        }
        return img;
    };

    // Basis reconstructions overlap heavily at low frequencies, which makes
    // raw coordinate descent numerically useless here (condition numbers in
    // the 1e6 range). The descent direction is therefore preconditioned with
    // the inverse basis Gram matrix; the gradient itself stays exact.
    const double num_px = static_cast<double>(layout.out_size) * layout.out_size;
    std::vector<double> gram(p * p, 0.0);
    for (std::size_t s = 0; s < num_samples; ++s) {
        for (std::size_t k = 0; k < p; ++k) {
            for (std::size_t l = k; l < p; ++l) {
                double dot = 0.0;
                const Image& bk = basis[s][k];
                const Image& bl = basis[s][l];
                for (std::size_t i = 0; i < bk.size(); ++i) dot += bk.samples[i] * bl.samples[i];
                gram[k * p + l] += dot / (static_cast<double>(num_samples) * num_px);
            }
        }
    }
    for (std::size_t k = 0; k < p; ++k) {
        for (std::size_t l = 0; l < k; ++l) gram[k * p + l] = gram[l * p + k];
    }
    double trace = 0.0;
    for (std::size_t k = 0; k < p; ++k) trace += gram[k * p + k];
    const double ridge = 1e-8 * trace / static_cast<double>(p);

    auto mean_loss = [&](const std::vector<double>& coeffs) {
        LossBreakdown mean;
        for (std::size_t s = 0; s < num_samples; ++s) {
            const LossBreakdown b =
                combined_loss(reconstruct(s, coeffs), dataset[s].ground_truth, cfg);
            mean.total += b.total;
            mean.mse_term += b.mse_term;
            mean.eagle_term += b.eagle_term;
        }
        mean.total /= static_cast<double>(num_samples);
        mean.mse_term /= static_cast<double>(num_samples);
        mean.eagle_term /= static_cast<double>(num_samples);
        return mean;
    };

    std::vector<double> coeffs =
        ramp_projection(num_coeffs, layout.geom.num_detectors, layout.geom.detector_spacing)
            .coeffs;
    double lr = learning_rate;

    TrainResult result;
    result.log.reserve(static_cast<std::size_t>(epochs) + 1);
    LossBreakdown current = mean_loss(coeffs);
    result.log.push_back({0, current.total, current.mse_term, current.eagle_term});

    for (int epoch = 1; epoch <= epochs; ++epoch) {
        std::vector<double> grad(p, 0.0);
        for (std::size_t s = 0; s < num_samples; ++s) {
            const Image rec = reconstruct(s, coeffs);
            const Image rec_grad = combined_loss_gradient(rec, dataset[s].ground_truth, cfg);
            for (std::size_t k = 0; k < p; ++k) {
                double dot = 0.0;
                const Image& b = basis[s][k];
                for (std::size_t i = 0; i < rec_grad.size(); ++i) {
                    dot += rec_grad.samples[i] * b.samples[i];
                }
                grad[k] += dot / static_cast<double>(num_samples);
            }
        }

        const std::vector<double> direction = spd_solve(gram, static_cast<int>(p), grad, ridge);
        std::vector<double> proposed = coeffs;
        for (std::size_t k = 0; k < p; ++k) proposed[k] -= lr * direction[k];
        const LossBreakdown proposed_loss = mean_loss(proposed);
        if (proposed_loss.total <= current.total) {
            coeffs = std::move(proposed);
            current = proposed_loss;
        } else {
            lr *= 0.5; // reject the step, retry smaller next epoch
        }
        result.log.push_back({epoch, current.total, current.mse_term, current.eagle_term});
    }

    result.coeffs.coeffs = std::move(coeffs);
    result.coeffs.num_detectors = layout.geom.num_detectors;
    return result;
}

std::vector<AblationRow> kappa_ablation(const std::vector<TrainSample>& dataset,
                                        const std::vector<double>& kappa_values, int epochs,
                                        double learning_rate, const EagleConfig& base_cfg,
                                        int num_coeffs) {
    if (kappa_values.size() < 2) {
        throw ConfigError("kappa_ablation: needs at least 2 cutoff values");
    }
    const DatasetLayout layout = require_dataset(dataset, base_cfg, "kappa_ablation");

    std::vector<AblationRow> rows;
    rows.reserve(kappa_values.size());
    for (double kappa : kappa_values) {
        EagleConfig cfg = base_cfg;
        cfg.kappa = kappa;
        const TrainResult trained = train_filter(dataset, cfg, epochs, learning_rate, num_coeffs);

        AblationRow row;
        row.kappa = kappa;
        row.coeffs = trained.coeffs;
        row.response = filter_response(trained.coeffs);
        for (const TrainSample& s : dataset) {
            const Image rec =
                tf_fbp_reconstruct(s.sino, s.sino.geometry, trained.coeffs, layout.out_size);
            const MetricReport report = evaluate(rec, s.ground_truth);
            row.psnr_db += report.psnr_db;
            row.ssim += report.ssim;
            row.hf_energy += high_frequency_energy_fraction(rec);
        }
        row.psnr_db /= static_cast<double>(dataset.size());
        row.ssim /= static_cast<double>(dataset.size());
        row.hf_energy /= static_cast<double>(dataset.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace eagle
