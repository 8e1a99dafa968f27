// Timing comparison of the OpenMP kernels against the serial reference
// implementations, with agreement checked on the same inputs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "eagle/imagecore.hpp"
#include "eagle/loss.hpp"
#include "eagle/metrics.hpp"
#include "eagle/parallel.hpp"
#include "eagle/phantom.hpp"
#include "eagle/rng.hpp"
#include "eagle/spectral.hpp"
#include "eagle/tomo.hpp"
#include "ref/reference.hpp"

using namespace eagle;

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
    fn(); // warm up
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

void report(const char* name, double parallel_ms, double serial_ms, double max_diff) {
    std::printf("%-22s  parallel %9.3f ms   serial %9.3f ms   speedup %5.2fx   max|diff| %.2e\n",
                name, parallel_ms, serial_ms, serial_ms / parallel_ms, max_diff);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace

int main() {
    apply_thread_env();
    std::printf("threads: %d\n\n", max_threads());

    Rng rng(1);
    Image img(256, 256);
    for (double& v : img.samples) v = rng.uniform();

    {
        Image out_par, out_ser;
        const double par =
            time_ms([&] { out_par = convolve_same(img, scharr_kernel_x()); }, 20);
        const double ser =
            time_ms([&] { out_ser = ref::convolve_same(img, scharr_kernel_x()); }, 20);
        report("convolve 256^2", par, ser, max_abs_diff(out_par.samples, out_ser.samples));
    }
    {
        Image grad(258, 258);
        for (double& v : grad.samples) v = rng.uniform(-3.0, 3.0);
        VarianceMap out_par, out_ser;
        const double par = time_ms([&] { out_par = unfold_variance(grad, 3); }, 50);
        const double ser = time_ms([&] { out_ser = ref::unfold_variance(grad, 3); }, 50);
        report("patch variance 258^2", par, ser, max_abs_diff(out_par.values, out_ser.values));
    }
    {
        VarianceMap grid(48, 48);
        for (double& v : grid.values) v = rng.uniform();
        ComplexSpectrum out_par, out_ser;
        const double par = time_ms([&] { out_par = dft2(grid); }, 10);
        const double ser = time_ms([&] { out_ser = ref::dft2(48, 48, grid.values); }, 3);
        double worst = 0.0;
        for (std::size_t i = 0; i < out_par.values.size(); ++i) {
            worst = std::max(worst, std::abs(out_par.values[i] - out_ser.values[i]));
        }
        report("dft2 48^2", par, ser, worst);
    }
    {
        Image a(96, 96), b(96, 96);
        for (double& v : a.samples) v = rng.uniform();
        for (double& v : b.samples) v = rng.uniform();
        double out_par = 0.0, out_ser = 0.0;
        const EagleConfig cfg{3, 0.3, 1e-3};
        const double par = time_ms([&] { out_par = eagle_loss(a, b, cfg); }, 10);
        const double ser = time_ms([&] { out_ser = ref::eagle_loss(a, b, cfg); }, 3);
        report("eagle loss 96^2", par, ser, std::abs(out_par - out_ser));
    }
    {
        Image a(128, 128), b(128, 128);
        for (double& v : a.samples) v = rng.uniform();
        for (double& v : b.samples) v = rng.uniform();
        double out_par = 0.0, out_ser = 0.0;
        const double par = time_ms([&] { out_par = ssim(a, b, 1.0); }, 10);
        const double ser = time_ms([&] { out_ser = ref::ssim(a, b, 1.0); }, 10);
        report("ssim 128^2", par, ser, std::abs(out_par - out_ser));
    }

    // thread scaling of the projector pair (no serial reference; the serial
    // column is the same kernel capped at one thread)
    {
        const Image phantom = shepp_logan(128);
        const Geometry geom = make_parallel_geometry(90, default_detector_count(128));
        Sinogram sino_par, sino_ser;
        const double par = time_ms([&] { sino_par = radon_forward(phantom, geom); }, 5);
        set_thread_cap(1);
        const double ser = time_ms([&] { sino_ser = radon_forward(phantom, geom); }, 5);
        set_thread_cap(0);
        report("radon 128^2 x90", par, ser, max_abs_diff(sino_par.values, sino_ser.values));

        Image rec_par, rec_ser;
        const double par2 = time_ms([&] { rec_par = fbp_reconstruct(sino_par, geom, 128); }, 5);
        set_thread_cap(1);
        const double ser2 = time_ms([&] { rec_ser = fbp_reconstruct(sino_par, geom, 128); }, 5);
        set_thread_cap(0);
        report("fbp 128^2 x90", par2, ser2, max_abs_diff(rec_par.samples, rec_ser.samples));
    }
    return 0;
}
