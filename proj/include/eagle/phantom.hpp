#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "eagle/image.hpp"

namespace eagle {

/// Ellipse in normalized [-1,1] coordinates; intensity_delta is added to every
/// pixel whose center falls inside.
struct EllipseSpec {
    double center_x = 0.0;
    double center_y = 0.0;
    double semi_axis_a = 0.0;
    double semi_axis_b = 0.0;
    double rotation = 0.0;
    double intensity_delta = 0.0;
};

/// The ten ellipses of the modified (Toft) Shepp-Logan head phantom.
const std::array<EllipseSpec, 10>& shepp_logan_ellipses();

/// Sum of intensity deltas of all ellipses containing each pixel center.
Image render_ellipses(int size, std::span<const EllipseSpec> ellipses);

/// Modified Shepp-Logan phantom, values in [0, 1]. size must be >= 32.
Image shepp_logan(int size);

/// Seed-deterministic random ellipse phantom, values clamped to [0, 1].
Image random_phantom(int size, int num_ellipses, std::uint64_t seed);

} // namespace eagle
