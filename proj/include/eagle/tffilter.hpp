#pragma once

#include <utility>
#include <vector>

#include "eagle/loss.hpp"
#include "eagle/tomo.hpp"

namespace eagle {

/// Reconstruction filter parameterized by cosine-series coefficients:
/// H(f) = sum_k c_k * cos(pi * k * f / f_max) on the detector-frequency grid.
struct FilterCoefficients {
    std::vector<double> coeffs;
    int num_detectors = 0;
};

/// Response samples on the padded half grid (length fft_pad_size/2 + 1),
/// even-symmetric in frequency by construction.
std::vector<double> filter_response(const FilterCoefficients& fc);

/// Cosine-series projection of the ramp |f| with f_max = 1/(2*spacing);
/// the classical filter expressed in this basis.
FilterCoefficients ramp_projection(int num_coeffs, int num_detectors, double spacing = 1.0);

/// Filtered backprojection with the trainable response in place of the ramp.
Image tf_fbp_reconstruct(const Sinogram& sino, const Geometry& geom,
                         const FilterCoefficients& fc, int out_size);

struct TrainSample {
    Sinogram sino;
    Image ground_truth;
};

struct EpochStats {
    int epoch = 0; // 0 is the initial state, k the state after the k-th update
    double total = 0.0;
    double mse_term = 0.0;
    double eagle_term = 0.0;
};

struct TrainResult {
    FilterCoefficients coeffs;
    std::vector<EpochStats> log;
};

/// Gradient descent on the mean combined loss over the dataset, starting from
/// the ramp projection. The coefficient gradient is exact: reconstruction is
/// linear in the coefficients, so dL/dc_k = <dL/drec, basis_k> with basis_k
/// the reconstruction from the k-th unit coefficient vector (precomputed per
/// sample). A step that increases the loss is rolled back and the learning
/// rate halved, so the logged loss never rises.
TrainResult train_filter(const std::vector<TrainSample>& dataset, const EagleConfig& cfg,
                         int epochs, double learning_rate, int num_coeffs = 63);

/// Fraction of |dft2(image)|^2 at radial frequencies above half-Nyquist
/// (0.25 cycles per sample).
double high_frequency_energy_fraction(const Image& image);

struct AblationRow {
    double kappa = 0.0;
    FilterCoefficients coeffs;
    std::vector<double> response;
    double psnr_db = 0.0;
    double ssim = 0.0;
    double hf_energy = 0.0;
};

/// Trains one filter per cutoff on identical data and reports mean metrics of
/// the resulting reconstructions. Requires at least two cutoff values.
std::vector<AblationRow> kappa_ablation(const std::vector<TrainSample>& dataset,
                                        const std::vector<double>& kappa_values, int epochs,
                                        double learning_rate, const EagleConfig& base_cfg = {},
                                        int num_coeffs = 63);

} // namespace eagle
