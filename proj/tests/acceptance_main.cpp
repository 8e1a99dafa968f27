// Acceptance checklist. Each criterion prints one PASS/FAIL line; the exit
// code is nonzero if any executed criterion fails. An optional argument
// selects a single criterion by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eagle/io_formats.hpp"
#include "eagle/loss.hpp"
#include "eagle/metrics.hpp"
#include "eagle/phantom.hpp"
#include "eagle/rng.hpp"
#include "eagle/spectral.hpp"
#include "eagle/tffilter.hpp"
#include "eagle/tomo.hpp"
#include "ref/reference.hpp"

using namespace eagle;
namespace fs = std::filesystem;

namespace {

const std::string cli_path = EAGLE_CLI_PATH;

fs::path out_dir() {
    const fs::path dir = fs::path("acceptance_out");
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd =
        cli_path + " " + args + " > " + (out_dir() / "cli_stdout.txt").string() + " 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

bool files_equal(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::string sa((std::istreambuf_iterator<char>(fa)), {});
    std::string sb((std::istreambuf_iterator<char>(fb)), {});
    return sa == sb;
}

Image random_image(int n, std::uint64_t seed) {
    Image img(n, n);
    Rng rng(seed);
    for (double& v : img.samples) v = rng.uniform();
    return img;
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
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

Sinogram noisy_shepp_logan_sinogram(int size, int angles, double rel_sigma, std::uint64_t seed,
                                    Image* phantom_out) {
    const Image phantom = shepp_logan(size);
    const Geometry geom = make_parallel_geometry(angles, default_detector_count(size));
    Sinogram sino = radon_forward(phantom, geom);
    double peak = 0.0;
    for (double v : sino.values) peak = std::max(peak, v);
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
    for (double& v : sino.values) v += rel_sigma * peak * rng.normal();
    if (phantom_out != nullptr) *phantom_out = phantom;
    return sino;
}

// ---- criteria ----

bool criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const int code = run_cli("gradcheck --size 9 --trials 20 --seed 42");
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return code == 0 && seconds < 60.0;
}

bool criterion_2() {
    const EagleConfig cfg{3, 0.3, 1e-3};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Image a = random_image(12, 100 + seed);
        const Image b = random_image(12, 200 + seed);
        if (eagle_loss(a, a, cfg) != 0.0) return false;
        const double base = eagle_loss(a, b, cfg);
        if (!(base > 0.0)) return false;
        if (eagle_loss(b, a, cfg) != base) return false;
        Image shifted = a;
        for (double& v : shifted.samples) v += 5.125;
        if (std::abs(eagle_loss(shifted, b, cfg) - base) > 1e-9 * base) return false;
        for (double c : {0.5, 2.0, 10.0}) {
            Image ca = a, cb = b;
            for (double& v : ca.samples) v *= c;
            for (double& v : cb.samples) v *= c;
            if (rel_err(eagle_loss(ca, cb, cfg), c * c * base) > 1e-9) return false;
        }
    }
    return true;
}

bool criterion_3() {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const EagleConfig cfg{3, seed % 2 == 0 ? 0.3 : 0.1, 1e-3};
        const Image a = random_image(12, 300 + seed);
        const Image b = random_image(12, 400 + seed);
        if (rel_err(eagle_loss(a, b, cfg), ref::eagle_loss(a, b, cfg)) > 1e-10) return false;
    }
    return true;
}

bool criterion_4() {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int w = 2 + static_cast<int>(seed % 15);
        const int h = 16 - static_cast<int>(seed % 13);
        VarianceMap grid(w, h);
        Rng rng(500 + seed);
        for (double& v : grid.values) v = rng.uniform(-1.0, 1.0);
        double spatial = 0.0;
        for (double v : grid.values) spatial += v * v;
        const ComplexSpectrum spec = dft2(grid);
        double spectral = 0.0;
        for (const auto& z : spec.values) spectral += std::norm(z);
        spectral /= static_cast<double>(w) * h;
        if (rel_err(spectral, spatial) > 1e-9) return false;
    }
    return true;
}

bool criterion_5() {
    // ramp-filtered backprojection of a clean 128^2 phantom
    const Image phantom = shepp_logan(128);
    const Geometry geom = make_parallel_geometry(180, default_detector_count(128));
    const Image rec = fbp_reconstruct(radon_forward(phantom, geom), geom, 128);
    if (!(masked_psnr(rec, phantom, 1.0) > 25.0)) return false;

    // consistent determined 4-unknown system
    const Geometry small = make_parallel_geometry(4, 3, 0.5);
    Image truth(2, 2);
    truth.samples = {0.5, 1.0, 1.5, 2.0};
    const Sinogram sino = radon_forward(truth, small);
    ArtConfig cfg;
    cfg.num_sweeps = 200;
    cfg.relaxation = 1.0;
    const auto [rec2, log] = art_reconstruct(sino, small, cfg, 2);
    if (!(log.back().data_residual < 1e-8)) return false;
    for (std::size_t i = 1; i < log.size(); ++i) {
        if (log[i].data_residual > log[i - 1].data_residual * (1.0 + 1e-12) + 1e-30) return false;
    }
    return true;
}

bool criterion_6() {
    const auto start = std::chrono::steady_clock::now();
    const int size = 129; // divisible by the patch size 3
    Image phantom;
    const Sinogram sino = noisy_shepp_logan_sinogram(size, 45, 0.01, 7, &phantom);
    const Geometry& geom = sino.geometry;
    const Image fbp = fbp_reconstruct(sino, geom, size);

    ArtConfig base;
    base.num_sweeps = 10;
    base.relaxation = 0.25;
    base.nonnegativity = true;

    const auto [rec_none, log_none] = art_reconstruct(sino, geom, base, size);
    const double ssim_none = ssim(rec_none, phantom, 1.0);

    ArtConfig eagle_cfg = base;
    eagle_cfg.reg_kind = RegKind::eagle;
    eagle_cfg.reg_weight = 1.0;
    eagle_cfg.reg_step = 0.5;
    eagle_cfg.eagle_cfg = EagleConfig{3, 0.1, 1e-3};
    const auto [rec_eagle, log_eagle] = art_reconstruct(sino, geom, eagle_cfg, size, &fbp);
    const double ssim_eagle = ssim(rec_eagle, phantom, 1.0);
    const double hf_eagle = high_frequency_energy_fraction(rec_eagle);

    std::printf("        ssim: none %.4f, eagle %.4f; hf eagle %.4f\n", ssim_none, ssim_eagle,
                hf_eagle);
    if (!(ssim_eagle > ssim_none)) return false;

    // TV runs over a weight grid; compare against the SSIM-matched one
    double best_gap = 1e9;
    double matched_hf = 0.0;
    double matched_ssim = 0.0;
    for (double w : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}) {
        ArtConfig tv_cfg = base;
        tv_cfg.reg_kind = RegKind::tv;
        tv_cfg.reg_weight = w;
        const auto [rec_tv, log_tv] = art_reconstruct(sino, geom, tv_cfg, size);
        const double ssim_tv = ssim(rec_tv, phantom, 1.0);
        const double gap = std::abs(ssim_tv - ssim_eagle);
        if (gap < best_gap) {
            best_gap = gap;
            matched_hf = high_frequency_energy_fraction(rec_tv);
            matched_ssim = ssim_tv;
        }
    }
    std::printf("        matched tv: ssim %.4f (gap %.4f), hf %.4f\n", matched_ssim, best_gap,
                matched_hf);
    if (best_gap > 0.01) return false;
    if (!(hf_eagle > matched_hf)) return false;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return seconds < 600.0;
}

bool criterion_7() {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = out_dir() / "ablation";
    fs::remove_all(dir);
    const int code = run_cli("ablate-kappa --kappas 0.1,0.2,0.3,0.4 --size 99 --angles 90 "
                             "--dataset-size 3 --noise-sigma 0.5 --seed 11 --epochs 25 --lr 1 "
                             "--coeffs 63 --out-dir " +
                             dir.string());
    if (code != 0) return false;

    std::ifstream table(dir / "ablation.csv");
    if (!table) return false;
    std::string line;
    std::getline(table, line); // header
    std::vector<double> hf;
    while (std::getline(table, line)) {
        std::stringstream ss(line);
        std::string field;
        for (int i = 0; i < 4 && std::getline(ss, field, ','); ++i) {
            if (i == 3) hf.push_back(std::stod(field));
        }
    }
    if (hf.size() != 4) return false;
    std::printf("        hf by kappa: %.5f %.5f %.5f %.5f\n", hf[0], hf[1], hf[2], hf[3]);

    int violations = 0;
    for (std::size_t i = 1; i < hf.size(); ++i) {
        if (hf[i] < hf[i - 1]) {
            ++violations;
            if ((hf[i - 1] - hf[i]) > 0.02 * hf[i - 1]) return false;
        }
    }
    if (violations > 1) return false;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return seconds < 900.0;
}

bool criterion_8() {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Image a = random_image(16, 600 + seed);
        const Image b = random_image(16, 700 + seed);
        if (rel_err(ssim(a, b, 1.0), ref::ssim(a, b, 1.0)) > 1e-10) return false;
        if (rel_err(psnr(a, b, 1.0), ref::psnr(a, b, 1.0)) > 1e-10) return false;
    }
    const Image img = random_image(16, 808);
    if (!std::isinf(psnr(img, img, 1.0))) return false;
    if (std::abs(ssim(img, img, 1.0) - 1.0) > 1e-12) return false;
    return true;
}

bool criterion_9() {
    const fs::path dir = out_dir();
    const std::string sim = "simulate --phantom random --size 33 --angles 12 --noise-sigma 0.4 "
                            "--seed 9 --out ";
    if (run_cli(sim + (dir / "det_a").string()) != 0) return false;
    if (run_cli(sim + (dir / "det_b").string()) != 0) return false;
    for (const char* suffix : {"", ".json", ".gt", ".gt.json"}) {
        if (!files_equal(dir / ("det_a" + std::string(suffix)),
                         dir / ("det_b" + std::string(suffix)))) {
            return false;
        }
    }

    const std::string rec = "reconstruct --method art --reg eagle --reg-weight 0.5 --kappa 0.1 "
                            "--sweeps 3 --sino " +
                            (dir / "det_a").string() + " --gt " + (dir / "det_a.gt").string();
    if (run_cli(rec + " --out " + (dir / "rec_a.f32").string()) != 0) return false;
    if (run_cli(rec + " --out " + (dir / "rec_b.f32").string()) != 0) return false;
    if (!files_equal(dir / "rec_a.f32", dir / "rec_b.f32")) return false;

    const std::string train = "train-filter --epochs 3 --lr 1 --size 24 --angles 10 "
                              "--dataset-size 2 --noise-sigma 0.3 --seed 5 --coeffs 8 ";
    if (run_cli(train + "--out-coeffs " + (dir / "c_a.csv").string() + " --log " +
                (dir / "l_a.csv").string()) != 0) {
        return false;
    }
    if (run_cli(train + "--out-coeffs " + (dir / "c_b.csv").string() + " --log " +
                (dir / "l_b.csv").string()) != 0) {
        return false;
    }
    return files_equal(dir / "c_a.csv", dir / "c_b.csv") &&
           files_equal(dir / "l_a.csv", dir / "l_b.csv");
}

struct Criterion {
    int number;
    const char* summary;
    bool (*check)();
};

const Criterion kCriteria[] = {
    {1, "analytic gradients match finite differences (gradcheck)", criterion_1},
    {2, "loss axioms: identity, symmetry, DC blindness, homogeneity", criterion_2},
    {3, "loss matches the independent naive pipeline to 1e-10", criterion_3},
    {4, "Parseval energy identity within 1e-9", criterion_4},
    {5, "FBP PSNR floor and consistent-system ART convergence", criterion_5},
    {6, "sparse-view ART: eagle beats none on SSIM, beats matched TV on HF", criterion_6},
    {7, "kappa ablation: high-frequency energy nondecreasing in kappa", criterion_7},
    {8, "SSIM/PSNR match brute-force oracles; identity values exact", criterion_8},
    {9, "seeded subcommands are byte-for-byte reproducible", criterion_9},
};

} // namespace

int main(int argc, char** argv) {
    int selected = 0;
    if (argc > 1) selected = std::atoi(argv[1]);

    bool all_pass = true;
    for (const Criterion& criterion : kCriteria) {
        if (selected != 0 && criterion.number != selected) continue;
        const bool ok = criterion.check();
        all_pass = all_pass && ok;
        std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion.number,
                    criterion.summary);
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
