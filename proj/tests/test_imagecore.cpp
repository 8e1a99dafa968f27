#include "doctest.h"

#include <cmath>

#include "eagle/imagecore.hpp"
#include "ref/reference.hpp"
#include "test_support.hpp"

using namespace eagle;
using testsup::random_image;

TEST_SUITE_BEGIN("imagecore");

TEST_CASE("zero-sum kernel annihilates constant images") {
    Image img(6, 5, 3.75);
    for (const Kernel3* k : {&scharr_kernel_x(), &scharr_kernel_y()}) {
        const Image out = convolve_same(img, *k);
        for (double v : out.samples) CHECK(v == 0.0);
    }
}

TEST_CASE("identity kernel leaves the image unchanged") {
    Kernel3 identity{{0, 0, 0, 0, 1, 0, 0, 0, 0}};
    Image img(5, 5);
    img.at(2, 2) = 1.0;
    const Image out = convolve_same(img, identity);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(out.samples[i] == img.samples[i]);
}

TEST_CASE("ramp image convolved with the horizontal stencil") {
    Image ramp(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) ramp.at(r, c) = c;
    const Image got = convolve_same(ramp, scharr_kernel_x());
    const Image want = ref::convolve_same(ramp, scharr_kernel_x());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got.samples[i] == doctest::Approx(want.samples[i]).epsilon(1e-12));
    }
    // interior columns all share one value
    CHECK(got.at(1, 1) == got.at(2, 1));
    CHECK(got.at(1, 2) == got.at(2, 2));
    CHECK(got.at(1, 1) == got.at(1, 2));
}

TEST_CASE("convolution matches the nested-loop reference on random images") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
        const int w = 3 + static_cast<int>(seed % 10);
        const int h = 12 - static_cast<int>(seed % 7);
        const Image img = random_image(w, h, seed, -2.0, 2.0);
        for (const Kernel3* k : {&scharr_kernel_x(), &scharr_kernel_y()}) {
            const Image got = convolve_same(img, *k);
            const Image want = ref::convolve_same(img, *k);
            CHECK(testsup::max_scaled_err(got.samples, want.samples) < 1e-12);
        }
    }
}

TEST_CASE("convolution rejects images smaller than 3x3") {
    CHECK_THROWS_AS(convolve_same(Image(2, 5), scharr_kernel_x()), DimensionError);
    CHECK_THROWS_AS(convolve_same(Image(5, 2), scharr_kernel_x()), DimensionError);
}

TEST_CASE("scharr gradients of simple images") {
    SUBCASE("constant image also gives zero gradients") {
        const auto [gx, gy] = scharr_gradients(Image(5, 5, 2.5));
        for (double v : gx.samples) CHECK(v == 0.0);
        for (double v : gy.samples) CHECK(v == 0.0);
    }
    SUBCASE("horizontal ramp: G_x constant and G_y zero on the interior") {
        Image ramp(6, 6);
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c) ramp.at(r, c) = c;
        const auto [gx, gy] = scharr_gradients(ramp);
        const double interior = gx.at(2, 2);
        CHECK(interior != 0.0);
        for (int r = 1; r < 5; ++r) {
            for (int c = 1; c < 5; ++c) {
                CHECK(gx.at(r, c) == doctest::Approx(interior).epsilon(1e-12));
                CHECK(gy.at(r, c) == doctest::Approx(0.0).epsilon(1e-12));
            }
        }
    }
    SUBCASE("DC shift leaves gradients unchanged") {
        const Image img = random_image(9, 9, 21);
        Image shifted = img;
        for (double& v : shifted.samples) v += 7.5;
        const auto [gx0, gy0] = scharr_gradients(img);
        const auto [gx1, gy1] = scharr_gradients(shifted);
        for (std::size_t i = 0; i < gx0.size(); ++i) {
            CHECK(gx1.samples[i] == doctest::Approx(gx0.samples[i]).epsilon(1e-11));
            CHECK(gy1.samples[i] == doctest::Approx(gy0.samples[i]).epsilon(1e-11));
        }
    }
}

TEST_CASE("transpose symmetry of the kernel pair") {
    const Image img = random_image(7, 5, 33, -1.0, 1.0);
    const auto [gx, gy] = scharr_gradients(img);
    const auto [gxt, gyt] = scharr_gradients(transpose(img));
    const Image gyT = transpose(gy);
    const Image gxT = transpose(gx);
    for (std::size_t i = 0; i < gxt.size(); ++i) {
        CHECK(gxt.samples[i] == doctest::Approx(gyT.samples[i]).epsilon(1e-12));
        CHECK(gyt.samples[i] == doctest::Approx(gxT.samples[i]).epsilon(1e-12));
    }
}

TEST_CASE("patch variance basics") {
    SUBCASE("constant map gives zero variances") {
        const VarianceMap v = unfold_variance(Image(6, 6, 4.0), 3);
        CHECK(v.width == 2);
        CHECK(v.height == 2);
        for (double x : v.values) CHECK(x == 0.0);
    }
    SUBCASE("3x3 patch of 1..9 has population variance 60/9") {
        Image img(3, 3);
        for (int i = 0; i < 9; ++i) img.samples[i] = i + 1;
        const VarianceMap v = unfold_variance(img, 3);
        CHECK(v.values[0] == doctest::Approx(60.0 / 9.0).epsilon(1e-12));
    }
    SUBCASE("6x6 map with n=3 yields a 2x2 grid") {
        const VarianceMap v = unfold_variance(random_image(6, 6, 5), 3);
        CHECK(v.width == 2);
        CHECK(v.height == 2);
    }
}

TEST_CASE("variance errors name the offending axis") {
    CHECK_THROWS_WITH_AS(unfold_variance(Image(7, 6), 3), doctest::Contains("width"),
                         DimensionError);
    CHECK_THROWS_WITH_AS(unfold_variance(Image(6, 7), 3), doctest::Contains("height"),
                         DimensionError);
}

TEST_CASE("variance shift invariance and scale covariance") {
    const Image g = random_image(12, 12, 77, -3.0, 3.0);
    const VarianceMap base = unfold_variance(g, 3);
    SUBCASE("adding a constant changes nothing") {
        Image shifted = g;
        for (double& v : shifted.samples) v += 41.25;
        const VarianceMap got = unfold_variance(shifted, 3);
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(got.values[i] == doctest::Approx(base.values[i]).epsilon(1e-9));
        }
    }
    SUBCASE("scaling by c multiplies variances by c^2") {
        for (double c : {0.5, 2.0, -1.75}) {
            Image scaled = g;
            for (double& v : scaled.samples) v *= c;
            const VarianceMap got = unfold_variance(scaled, 3);
            for (std::size_t i = 0; i < base.size(); ++i) {
                CHECK(got.values[i] == doctest::Approx(c * c * base.values[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("variance matches the reference on random images") {
    for (std::uint64_t seed : {101u, 102u, 103u}) {
        const Image g = random_image(12, 9, seed, -5.0, 5.0);
        const VarianceMap got = unfold_variance(g, 3);
        const VarianceMap want = ref::unfold_variance(g, 3);
        CHECK(testsup::max_scaled_err(got.values, want.values) < 1e-12);
    }
}

TEST_CASE("adjoint convolution is the transpose of convolution") {
    // <K*x, y> == <x, adjoint(y)> for random x, y
    const Image x = random_image(8, 6, 55, -1.0, 1.0);
    const Image y = random_image(8, 6, 56, -1.0, 1.0);
    for (const Kernel3* k : {&scharr_kernel_x(), &scharr_kernel_y()}) {
        const Image fwd = convolve_same(x, *k);
        const Image adj = convolve_same_adjoint(y, *k);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            lhs += fwd.samples[i] * y.samples[i];
            rhs += x.samples[i] * adj.samples[i];
        }
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("center crop to a multiple of the patch size") {
    const Image img = random_image(8, 7, 91);
    const Image cropped = center_crop_multiple(img, 3);
    CHECK(cropped.width == 6);
    CHECK(cropped.height == 6);
    CHECK(cropped.at(0, 0) == img.at(0, 1));
}

TEST_SUITE_END();
