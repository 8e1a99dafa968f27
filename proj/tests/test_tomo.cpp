#include "doctest.h"

#include <array>
#include <cmath>

#include "eagle/metrics.hpp"
#include "eagle/phantom.hpp"
#include "eagle/tomo.hpp"
#include "test_support.hpp"

using namespace eagle;
using testsup::random_image;

namespace {

// 4x4-supersampled disc so pixel values approximate area coverage; line
// integrals through it then approach the continuous chord lengths.
Image centered_disc(int size, double radius, double value = 1.0) {
    Image img(size, size);
    const double center = 0.5 * (size - 1);
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            int hits = 0;
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    const double dy = r - center + (i - 1.5) / 4.0;
                    const double dx = c - center + (j - 1.5) / 4.0;
                    if (dx * dx + dy * dy <= radius * radius) ++hits;
                }
            }
            img.at(r, c) = value * hits / 16.0;
        }
    }
    return img;
}

double masked_psnr(const Image& rec, const Image& gt, double data_range) {
    const double center = 0.5 * (gt.width - 1);
    const double radius = 0.5 * gt.width;
    double mse = 0.0;
    long count = 0;
    for (int r = 0; r < gt.height; ++r) {
        for (int c = 0; c < gt.width; ++c) {
            const double dx = c - center;
            const double dy = r - center;
            if (dx * dx + dy * dy > radius * radius) continue;
            const double d = rec.at(r, c) - gt.at(r, c);
            mse += d * d;
            ++count;
        }
    }
    mse /= static_cast<double>(count);
    return 10.0 * std::log10(data_range * data_range / mse);
}

// Dense system matrix built by probing the projector with unit images.
std::vector<double> probe_matrix(const Geometry& geom, int size) {
    const int unknowns = size * size;
    const int rays = geom.num_angles * geom.num_detectors;
    std::vector<double> a(static_cast<std::size_t>(rays) * unknowns, 0.0);
    for (int p = 0; p < unknowns; ++p) {
        Image unit(size, size);
        unit.samples[static_cast<std::size_t>(p)] = 1.0;
        const Sinogram col = radon_forward(unit, geom);
        for (int i = 0; i < rays; ++i) {
            a[static_cast<std::size_t>(i) * unknowns + p] = col.values[static_cast<std::size_t>(i)];
        }
    }
    return a;
}

// Solves the normal equations with plain Gaussian elimination.
std::vector<double> solve_normal_equations(const std::vector<double>& a, int rays, int unknowns,
                                           const std::vector<double>& b) {
    std::vector<double> ata(static_cast<std::size_t>(unknowns) * unknowns, 0.0);
    std::vector<double> atb(static_cast<std::size_t>(unknowns), 0.0);
    for (int i = 0; i < rays; ++i) {
        for (int p = 0; p < unknowns; ++p) {
            const double aip = a[static_cast<std::size_t>(i) * unknowns + p];
            atb[p] += aip * b[static_cast<std::size_t>(i)];
            for (int q = 0; q < unknowns; ++q) {
                ata[static_cast<std::size_t>(p) * unknowns + q] +=
                    aip * a[static_cast<std::size_t>(i) * unknowns + q];
            }
        }
    }
    for (int col = 0; col < unknowns; ++col) {
        int pivot = col;
        for (int r = col + 1; r < unknowns; ++r) {
            if (std::abs(ata[static_cast<std::size_t>(r) * unknowns + col]) >
                std::abs(ata[static_cast<std::size_t>(pivot) * unknowns + col])) {
                pivot = r;
            }
        }
        REQUIRE(std::abs(ata[static_cast<std::size_t>(pivot) * unknowns + col]) > 1e-10);
        for (int c = 0; c < unknowns; ++c) {
            std::swap(ata[static_cast<std::size_t>(col) * unknowns + c],
                      ata[static_cast<std::size_t>(pivot) * unknowns + c]);
        }
        std::swap(atb[col], atb[pivot]);
        for (int r = 0; r < unknowns; ++r) {
            if (r == col) continue;
            const double f = ata[static_cast<std::size_t>(r) * unknowns + col] /
                             ata[static_cast<std::size_t>(col) * unknowns + col];
            for (int c = col; c < unknowns; ++c) {
                ata[static_cast<std::size_t>(r) * unknowns + c] -=
                    f * ata[static_cast<std::size_t>(col) * unknowns + c];
            }
            atb[r] -= f * atb[col];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(unknowns));
    for (int p = 0; p < unknowns; ++p) {
        x[p] = atb[p] / ata[static_cast<std::size_t>(p) * unknowns + p];
    }
    return x;
}

} // namespace

TEST_SUITE_BEGIN("tomo");

TEST_CASE("projector basics") {
    const Geometry geom = make_parallel_geometry(12, 33);
    SUBCASE("zero image projects to a zero sinogram") {
        const Sinogram sino = radon_forward(Image(24, 24), geom);
        for (double v : sino.values) CHECK(v == 0.0);
    }
    SUBCASE("non-square images are rejected") {
        CHECK_THROWS_AS(radon_forward(Image(24, 26), geom), DimensionError);
    }
    SUBCASE("projector is linear") {
        const Image x = random_image(24, 24, 1);
        const Image y = random_image(24, 24, 2);
        Image mix(24, 24);
        for (std::size_t i = 0; i < mix.size(); ++i) {
            mix.samples[i] = 1.5 * x.samples[i] - 0.5 * y.samples[i];
        }
        const Sinogram sx = radon_forward(x, geom);
        const Sinogram sy = radon_forward(y, geom);
        const Sinogram sm = radon_forward(mix, geom);
        for (std::size_t i = 0; i < sm.values.size(); ++i) {
            const double want = 1.5 * sx.values[i] - 0.5 * sy.values[i];
            CHECK(std::abs(sm.values[i] - want) < 1e-9 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("central detector sees the chord of a centered disc") {
    const int size = 64;
    const Geometry geom = make_parallel_geometry(16, default_detector_count(size));
    const int central = (geom.num_detectors - 1) / 2;
    for (double radius : {8.0, 16.0}) {
        const Sinogram sino = radon_forward(centered_disc(size, radius), geom);
        for (int a = 0; a < geom.num_angles; ++a) {
            CHECK(sino.at(a, central) == doctest::Approx(2.0 * radius).epsilon(0.02));
        }
    }
}

TEST_CASE("rotationally symmetric phantoms give angle-independent rows") {
    const int size = 64;
    const Geometry geom = make_parallel_geometry(24, default_detector_count(size));
    Image blob(size, size);
    const double center = 0.5 * (size - 1);
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            const double d2 = (r - center) * (r - center) + (c - center) * (c - center);
            blob.at(r, c) = std::exp(-d2 / 60.0);
        }
    }
    const Sinogram sino = radon_forward(blob, geom);
    double row_max = 0.0;
    for (int k = 0; k < geom.num_detectors; ++k) row_max = std::max(row_max, sino.at(0, k));
    for (int a = 1; a < geom.num_angles; ++a) {
        for (int k = 0; k < geom.num_detectors; ++k) {
            CHECK(std::abs(sino.at(a, k) - sino.at(0, k)) <= 0.01 * row_max);
        }
    }
}

TEST_CASE("fbp of a zero sinogram is a zero image") {
    const Geometry geom = make_parallel_geometry(10, 20);
    Sinogram sino;
    sino.geometry = geom;
    sino.values.assign(200, 0.0);
    const Image rec = fbp_reconstruct(sino, geom, 12);
    for (double v : rec.samples) CHECK(v == 0.0);
}

TEST_CASE("fbp recovers a centered disc to 10% at the center") {
    const int size = 64;
    const Geometry geom = make_parallel_geometry(90, default_detector_count(size));
    const Image disc = centered_disc(size, 16.0);
    const Image rec = fbp_reconstruct(radon_forward(disc, geom), geom, size);
    CHECK(rec.at(31, 31) == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("fbp of a noise-free Shepp-Logan stays above the PSNR floor") {
    const int size = 128;
    const Image phantom = shepp_logan(size);
    const Geometry geom = make_parallel_geometry(180, 185);
    const Image rec = fbp_reconstruct(radon_forward(phantom, geom), geom, size);
    CHECK(masked_psnr(rec, phantom, 1.0) > 25.0);
}

TEST_CASE("unregularized kaczmarz solves a consistent 4-unknown system") {
    // 0.5-pixel detector spacing keeps all rays inside the 2x2 pixel hull;
    // the probed system has full rank 4 (checked via the oracle pivots)
    const int size = 2;
    const Geometry geom = make_parallel_geometry(4, 3, 0.5);
    Image truth(size, size);
    truth.samples = {0.5, 1.0, 1.5, 2.0};
    const Sinogram sino = radon_forward(truth, geom);

    // direct least-squares oracle over the probed dense matrix
    const auto a = probe_matrix(geom, size);
    const auto direct =
        solve_normal_equations(a, geom.num_angles * geom.num_detectors, size * size, sino.values);
    for (int p = 0; p < 4; ++p) CHECK(direct[p] == doctest::Approx(truth.samples[p]).epsilon(1e-8));

    ArtConfig cfg;
    cfg.num_sweeps = 200;
    cfg.relaxation = 1.0;
    const auto [rec, log] = art_reconstruct(sino, geom, cfg, size);
    REQUIRE(log.size() == 200);
    CHECK(log.back().data_residual < 1e-8);
    for (std::size_t i = 1; i < log.size(); ++i) {
        CHECK(log[i].data_residual <= log[i - 1].data_residual * (1.0 + 1e-12) + 1e-30);
    }
    for (int p = 0; p < 4; ++p) {
        CHECK(rec.samples[p] == doctest::Approx(direct[p]).epsilon(1e-6));
    }
}

TEST_CASE("zero regularization weight is bit-identical to no regularization") {
    const int size = 32;
    const Image phantom = shepp_logan(size);
    const Geometry geom = make_parallel_geometry(12, default_detector_count(size));
    const Sinogram sino = radon_forward(phantom, geom);

    ArtConfig plain;
    plain.num_sweeps = 3;
    const auto [rec_plain, log_plain] = art_reconstruct(sino, geom, plain, size);

    ArtConfig zero_tv = plain;
    zero_tv.reg_kind = RegKind::tv;
    zero_tv.reg_weight = 0.0;
    const auto [rec_tv, log_tv] = art_reconstruct(sino, geom, zero_tv, size);
    CHECK(rec_plain.samples == rec_tv.samples);
    for (std::size_t i = 0; i < log_plain.size(); ++i) {
        CHECK(log_plain[i].data_residual == log_tv[i].data_residual);
        CHECK(log_plain[i].reg_value == log_tv[i].reg_value);
    }
}

TEST_CASE("residual log is reproducible and monotone on noise-free data") {
    const int size = 32;
    const Image phantom = shepp_logan(size);
    const Geometry geom = make_parallel_geometry(16, default_detector_count(size));
    const Sinogram sino = radon_forward(phantom, geom);
    ArtConfig cfg;
    cfg.num_sweeps = 8;
    cfg.relaxation = 0.5;
    const auto [rec1, log1] = art_reconstruct(sino, geom, cfg, size);
    const auto [rec2, log2] = art_reconstruct(sino, geom, cfg, size);
    CHECK(rec1.samples == rec2.samples);
    for (std::size_t i = 0; i < log1.size(); ++i) {
        CHECK(log1[i].data_residual == log2[i].data_residual);
        if (i > 0) CHECK(log1[i].data_residual <= log1[i - 1].data_residual * (1.0 + 1e-12));
    }
}

TEST_CASE("shuffled sweep order is seed-deterministic") {
    const int size = 24;
    const Image phantom = random_image(size, size, 3);
    const Geometry geom = make_parallel_geometry(8, default_detector_count(size));
    const Sinogram sino = radon_forward(phantom, geom);
    ArtConfig cfg;
    cfg.num_sweeps = 2;
    cfg.shuffle_seed = 99;
    const auto [rec1, log1] = art_reconstruct(sino, geom, cfg, size);
    const auto [rec2, log2] = art_reconstruct(sino, geom, cfg, size);
    CHECK(rec1.samples == rec2.samples);

    ArtConfig ordered = cfg;
    ordered.shuffle_seed.reset();
    const auto [rec3, log3] = art_reconstruct(sino, geom, ordered, size);
    CHECK(rec1.samples != rec3.samples);
}

TEST_CASE("eagle regularization requires a reference image") {
    const Geometry geom = make_parallel_geometry(4, 8);
    Sinogram sino;
    sino.geometry = geom;
    sino.values.assign(32, 0.0);
    ArtConfig cfg;
    cfg.reg_kind = RegKind::eagle;
    cfg.reg_weight = 0.1;
    CHECK_THROWS_AS(art_reconstruct(sino, geom, cfg, 6), ConfigError);
}

TEST_CASE("nonnegativity clamp floors the iterate at zero") {
    const int size = 24;
    const Image img = centered_disc(size, 6.0);
    const Geometry geom = make_parallel_geometry(10, default_detector_count(size));
    Sinogram sino = radon_forward(img, geom);
    for (double& v : sino.values) v -= 1.0; // push toward negative solutions
    ArtConfig cfg;
    cfg.num_sweeps = 2;
    cfg.nonnegativity = true;
    const auto [rec, log] = art_reconstruct(sino, geom, cfg, size);
    for (double v : rec.samples) CHECK(v >= 0.0);
}

TEST_SUITE_END();
