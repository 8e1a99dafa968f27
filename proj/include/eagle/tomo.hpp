#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "eagle/image.hpp"
#include "eagle/loss.hpp"

namespace eagle {

/// Parallel-beam acquisition: evenly spaced angles over [0, pi), detector
/// offsets centered on the rotation axis in units of detector_spacing pixels.
struct Geometry {
    int num_angles = 0;
    int num_detectors = 0;
    double detector_spacing = 1.0;
    std::vector<double> angles;
};

Geometry make_parallel_geometry(int num_angles, int num_detectors, double spacing = 1.0);

/// Detector count whose span comfortably covers the diagonal of a size^2 image.
int default_detector_count(int size);

struct Sinogram {
    Geometry geometry;
    std::vector<double> values; // num_angles x num_detectors, row-major

    double& at(int a, int d) {
        return values[static_cast<std::size_t>(a) * geometry.num_detectors + d];
    }
    double at(int a, int d) const {
        return values[static_cast<std::size_t>(a) * geometry.num_detectors + d];
    }
};

/// Line integrals of the bilinearly interpolated image along each
/// (angle, detector offset) ray, sampled at half-pixel steps.
Sinogram radon_forward(const Image& image, const Geometry& geom);

/// |f| on the padded detector-frequency half grid (length fft_pad_size/2 + 1),
/// in cycles per pixel.
std::vector<double> ramp_response(const Geometry& geom);

/// Frequency-domain filtering of each angle row with the given half-grid
/// response, then backprojection scaled by pi/num_angles.
Image filtered_backprojection(const Sinogram& sino, const Geometry& geom,
                              std::span<const double> response, int out_size);

/// Classical ramp-filtered backprojection.
Image fbp_reconstruct(const Sinogram& sino, const Geometry& geom, int out_size);

enum class RegKind { none, tv, eagle };

struct ArtConfig {
    int num_sweeps = 20;
    double relaxation = 0.25;
    RegKind reg_kind = RegKind::none;
    double reg_weight = 0.0;
    double reg_step = 1.0;
    EagleConfig eagle_cfg{};
    bool nonnegativity = false;
    std::optional<std::uint64_t> shuffle_seed{}; // row order is angle-major when unset
};

struct SweepStats {
    int sweep = 0;
    double data_residual = 0.0; // ||Ax - b||^2 under the same ray model
    double reg_value = 0.0;
};

/// Kaczmarz row-action sweeps with an optional explicit regularization step
/// after each sweep. The eagle regularizer compares against `reference`
/// (required in that mode); rows use the same sampling as radon_forward.
std::pair<Image, std::vector<SweepStats>> art_reconstruct(const Sinogram& sino,
                                                          const Geometry& geom,
                                                          const ArtConfig& cfg, int out_size,
                                                          const Image* reference = nullptr);

} // namespace eagle
