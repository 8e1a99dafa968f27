#include "eagle/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "eagle/rng.hpp"

namespace eagle {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double deg(double d) { return d * kPi / 180.0; }
} // namespace

const std::array<EllipseSpec, 10>& shepp_logan_ellipses() {
    // Modified (Toft) intensities; rotation positive counterclockwise.
    static const std::array<EllipseSpec, 10> ellipses = {{
        {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
        {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8},
        {0.22, 0.0, 0.11, 0.31, deg(-18.0), -0.2},
        {-0.22, 0.0, 0.16, 0.41, deg(18.0), -0.2},
        {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},
        {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
        {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},
        {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
        {0.0, -0.606, 0.023, 0.023, 0.0, 0.1},
        {0.06, -0.605, 0.023, 0.046, 0.0, 0.1},
    }};
    return ellipses;
}

Image render_ellipses(int size, std::span<const EllipseSpec> ellipses) {
    if (size < 1) throw ParameterError("render_ellipses: size must be >= 1");
    struct Prepared {
        double cx, cy, cos_r, sin_r, inv_a2, inv_b2, delta;
    };
    std::vector<Prepared> prep;
    prep.reserve(ellipses.size());
    for (const EllipseSpec& e : ellipses) {
        if (!(e.semi_axis_a > 0.0) || !(e.semi_axis_b > 0.0)) {
            throw ParameterError("render_ellipses: semi-axes must be > 0");
        }
        prep.push_back({e.center_x, e.center_y, std::cos(e.rotation), std::sin(e.rotation),
                        1.0 / (e.semi_axis_a * e.semi_axis_a),
                        1.0 / (e.semi_axis_b * e.semi_axis_b), e.intensity_delta});
    }
    Image out(size, size);
#pragma omp parallel for
    for (int r = 0; r < size; ++r) {
        // pixel centers mapped to [-1, 1]; rows grow downward, y grows upward
        const double y = static_cast<double>(size - 2 * r - 1) / size;
        for (int c = 0; c < size; ++c) {
            const double x = static_cast<double>(2 * c + 1 - size) / size;
            double value = 0.0;
            for (const Prepared& p : prep) {
                const double dx = x - p.cx;
                const double dy = y - p.cy;
                const double xr = p.cos_r * dx + p.sin_r * dy;
                const double yr = -p.sin_r * dx + p.cos_r * dy;
                if (xr * xr * p.inv_a2 + yr * yr * p.inv_b2 <= 1.0) value += p.delta;
            }
            out.at(r, c) = value;
        }
    }
    return out;
}

Image shepp_logan(int size) {
    if (size < 32) throw ParameterError("shepp_logan: size must be >= 32");
    Image img = render_ellipses(size, shepp_logan_ellipses());
    // the delta sums are within [0, 1] exactly; rounding leaves -1e-17 residue
    for (double& v : img.samples) v = std::clamp(v, 0.0, 1.0);
    return img;
}

Image random_phantom(int size, int num_ellipses, std::uint64_t seed) {
    if (size < 1) throw ParameterError("random_phantom: size must be >= 1");
    if (num_ellipses < 1) throw ParameterError("random_phantom: num_ellipses must be >= 1");
    Rng rng(seed);
    std::vector<EllipseSpec> ellipses;
    ellipses.reserve(static_cast<std::size_t>(num_ellipses));
    for (int i = 0; i < num_ellipses; ++i) {
        EllipseSpec e;
        e.semi_axis_a = rng.uniform(0.05, 0.35);
        e.semi_axis_b = rng.uniform(0.05, 0.35);
        // center constrained so the rotated ellipse stays inside the unit disc
        const double bound = std::max(e.semi_axis_a, e.semi_axis_b);
        const double radius = rng.uniform(0.0, 1.0 - bound);
        const double angle = rng.uniform(0.0, 2.0 * kPi);
        e.center_x = radius * std::cos(angle);
        e.center_y = radius * std::sin(angle);
        e.rotation = rng.uniform(0.0, kPi);
        e.intensity_delta = rng.uniform(-0.4, 0.6);
        ellipses.push_back(e);
    }
    Image img = render_ellipses(size, ellipses);
    for (double& v : img.samples) v = std::clamp(v, 0.0, 1.0);
    return img;
}

} // namespace eagle
