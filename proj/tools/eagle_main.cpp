// Command-line driver: loss evaluation, gradient checking, simulation,
// FBP/ART reconstruction, filter training and the cutoff-frequency sweep.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eagle/io_formats.hpp"
#include "eagle/loss.hpp"
#include "eagle/metrics.hpp"
#include "eagle/parallel.hpp"
#include "eagle/phantom.hpp"
#include "eagle/rng.hpp"
#include "eagle/tffilter.hpp"
#include "eagle/tomo.hpp"

namespace {

using namespace eagle;

constexpr std::uint64_t kNoiseSeedSalt = 0x9e3779b97f4a7c15ull;

void print_csv(const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::cout << csv_line(header) << "\n";
    for (const auto& row : rows) std::cout << csv_line(row) << "\n";
}

Sinogram load_sinogram(const std::string& path, double spacing) {
    const Image img = read_image(path);
    Sinogram sino;
    sino.geometry = make_parallel_geometry(img.height, img.width, spacing);
    sino.values = img.samples;
    return sino;
}

void store_sinogram(const std::string& path, const Sinogram& sino, const std::string& desc) {
    Image img(sino.geometry.num_detectors, sino.geometry.num_angles);
    img.samples = sino.values;
    write_image(path, img, desc);
}

void add_noise(Sinogram& sino, double sigma, std::uint64_t seed) {
    if (sigma <= 0.0) return;
    Rng rng(seed ^ kNoiseSeedSalt);
    for (double& v : sino.values) v += sigma * rng.normal();
}

Image make_phantom(const std::string& kind, int size, std::uint64_t seed) {
    if (kind == "shepp") return shepp_logan(size);
    return random_phantom(size, 8, seed);
}

std::vector<TrainSample> make_training_set(int count, int size, int num_angles,
                                           double noise_sigma, std::uint64_t seed) {
    const Geometry geom = make_parallel_geometry(num_angles, default_detector_count(size));
    std::vector<TrainSample> dataset;
    dataset.reserve(static_cast<std::size_t>(count));
    Rng noise(seed ^ kNoiseSeedSalt);
    for (int i = 0; i < count; ++i) {
        TrainSample sample;
        sample.ground_truth = random_phantom(size, 6, seed + static_cast<std::uint64_t>(i));
        sample.sino = radon_forward(sample.ground_truth, geom);
        if (noise_sigma > 0.0) {
            for (double& v : sample.sino.values) v += noise_sigma * noise.normal();
        }
        dataset.push_back(std::move(sample));
    }
    return dataset;
}

void write_response_csv(const std::string& path, const std::vector<double>& response) {
    std::vector<std::vector<std::string>> rows;
    const int half = static_cast<int>(response.size()) - 1;
    for (std::size_t m = 0; m < response.size(); ++m) {
        // frequency in cycles per detector sample, [0, 0.5]
        const double freq = 0.5 * static_cast<double>(m) / half;
        rows.push_back({format_double(freq), format_double(response[m])});
    }
    write_csv(path, {"frequency", "response"}, rows);
}

Image central_difference(const Image& at, const Image& gt, const EagleConfig& cfg, bool combined,
                         double step) {
    Image grad(at.width, at.height);
    Image probe = at;
    for (std::size_t i = 0; i < at.samples.size(); ++i) {
        const double orig = probe.samples[i];
        probe.samples[i] = orig + step;
        const double up =
            combined ? combined_loss(probe, gt, cfg).total : eagle_loss(probe, gt, cfg);
        probe.samples[i] = orig - step;
        const double down =
            combined ? combined_loss(probe, gt, cfg).total : eagle_loss(probe, gt, cfg);
        probe.samples[i] = orig;
        grad.samples[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

int run_gradcheck(int size, int trials, std::uint64_t seed) {
    const double tolerance = 1e-4;
    bool all_pass = true;
    std::vector<std::vector<std::string>> rows;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(seed + static_cast<std::uint64_t>(trial) * 1000003ull);
        Image rec(size, size), gt(size, size);
        for (double& v : rec.samples) v = rng.uniform();
        for (double& v : gt.samples) v = rng.uniform();
        for (double kappa : {0.1, 0.3}) {
            const EagleConfig cfg{3, kappa, 1e-3};
            for (bool combined : {false, true}) {
                const Image analytic = combined ? combined_loss_gradient(rec, gt, cfg)
                                                : eagle_loss_gradient(rec, gt, cfg);
                const Image fd = central_difference(rec, gt, cfg, combined, 1e-4);
                double worst = 0.0;
                for (std::size_t i = 0; i < analytic.samples.size(); ++i) {
                    const double a = analytic.samples[i];
                    if (std::abs(a) <= 1e-8) continue;
                    worst = std::max(worst, std::abs(fd.samples[i] - a) / std::abs(a));
                }
                const bool pass = worst < tolerance;
                all_pass = all_pass && pass;
                rows.push_back({std::to_string(trial), format_double(kappa),
                                combined ? "combined" : "eagle", format_double(worst),
                                pass ? "pass" : "fail"});
            }
        }
    }
    print_csv({"trial", "kappa", "loss", "max_rel_err", "status"}, rows);
    return all_pass ? 0 : 1;
}

RegKind parse_reg(const std::string& name) {
    if (name == "none") return RegKind::none;
    if (name == "tv") return RegKind::tv;
    return RegKind::eagle;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CT reconstruction sandbox built around a spectral edge-aware loss"};
    app.require_subcommand(1);
    int exit_code = 0;

    // ---- loss ----
    auto* loss_cmd = app.add_subcommand("loss", "evaluate the combined loss between two images");
    std::string loss_rec, loss_gt;
    EagleConfig loss_cfg;
    bool loss_crop = false;
    loss_cmd->add_option("--rec", loss_rec, "reconstructed image file")->required();
    loss_cmd->add_option("--gt", loss_gt, "ground-truth image file")->required();
    loss_cmd->add_option("--n", loss_cfg.patch_size, "patch size")->check(CLI::PositiveNumber);
    loss_cmd->add_option("--kappa", loss_cfg.kappa, "high-pass cutoff")
        ->check(CLI::NonNegativeNumber);
    loss_cmd->add_option("--lambda", loss_cfg.lambda_weight, "spectral term weight")
        ->check(CLI::NonNegativeNumber);
    loss_cmd->add_flag("--center-crop", loss_crop,
                       "crop both images to the largest centered patch-multiple");
    loss_cmd->callback([&] {
        Image rec = read_image(loss_rec);
        Image gt = read_image(loss_gt);
        if (loss_crop) {
            rec = center_crop_multiple(rec, loss_cfg.patch_size);
            gt = center_crop_multiple(gt, loss_cfg.patch_size);
        }
        const LossBreakdown b = combined_loss(rec, gt, loss_cfg);
        print_csv({"total", "mse", "eagle"},
                  {{format_double(b.total), format_double(b.mse_term),
                    format_double(b.eagle_term)}});
    });

    // ---- gradcheck ----
    auto* grad_cmd =
        app.add_subcommand("gradcheck", "verify analytic gradients against finite differences");
    int grad_size = 9;
    int grad_trials = 20;
    std::uint64_t grad_seed = 42;
    grad_cmd->add_option("--size", grad_size, "image side length (multiple of 3)")
        ->check(CLI::Range(6, 60))
        ->check([](const std::string& s) {
            return std::stoi(s) % 3 == 0 ? std::string{} : std::string{"must be a multiple of 3"};
        });
    grad_cmd->add_option("--trials", grad_trials, "number of random pairs")
        ->check(CLI::PositiveNumber);
    grad_cmd->add_option("--seed", grad_seed, "base seed");
    grad_cmd->callback([&] { exit_code = run_gradcheck(grad_size, grad_trials, grad_seed); });

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "project a phantom and add detector noise");
    std::string sim_phantom = "shepp";
    int sim_size = 128;
    int sim_angles = 180;
    double sim_sigma = 0.0;
    std::uint64_t sim_seed = 1;
    std::string sim_out;
    sim_cmd->add_option("--phantom", sim_phantom, "phantom kind")
        ->check(CLI::IsMember({"shepp", "random"}));
    sim_cmd->add_option("--size", sim_size, "phantom side length")->check(CLI::Range(8, 4096));
    sim_cmd->add_option("--angles", sim_angles, "number of projection angles")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--noise-sigma", sim_sigma, "additive Gaussian sigma on the sinogram")
        ->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--seed", sim_seed, "seed for phantom sampling and noise");
    sim_cmd->add_option("--out", sim_out, "sinogram output path (phantom goes to <out>.gt)")
        ->required();
    sim_cmd->callback([&] {
        const Image phantom = make_phantom(sim_phantom, sim_size, sim_seed);
        const Geometry geom =
            make_parallel_geometry(sim_angles, default_detector_count(sim_size));
        Sinogram sino = radon_forward(phantom, geom);
        add_noise(sino, sim_sigma, sim_seed);
        write_image(sim_out + ".gt", phantom, "ground-truth phantom, size " +
                                                  std::to_string(sim_size));
        store_sinogram(sim_out, sino,
                       "parallel-beam sinogram, angles=" + std::to_string(geom.num_angles) +
                           " detectors=" + std::to_string(geom.num_detectors) + " spacing=1");
    });

    // ---- reconstruct ----
    auto* rec_cmd = app.add_subcommand("reconstruct", "FBP or ART reconstruction of a sinogram");
    std::string rec_sino, rec_method = "fbp", rec_reg = "none", rec_out, rec_gt, rec_reference,
                rec_log, rec_pgm;
    int rec_size = 0;
    double rec_spacing = 1.0;
    ArtConfig art_cfg;
    std::int64_t rec_shuffle = -1;
    rec_cmd->add_option("--sino", rec_sino, "sinogram file")->required();
    rec_cmd->add_option("--method", rec_method, "reconstruction method")
        ->check(CLI::IsMember({"fbp", "art"}));
    rec_cmd->add_option("--reg", rec_reg, "ART regularizer")
        ->check(CLI::IsMember({"none", "tv", "eagle"}));
    rec_cmd->add_option("--out", rec_out, "reconstruction output path")->required();
    rec_cmd->add_option("--size", rec_size, "output side length (defaults to the --gt size)");
    rec_cmd->add_option("--gt", rec_gt, "ground truth for the metric report");
    rec_cmd->add_option("--reference", rec_reference,
                        "eagle reference image (defaults to the FBP of --sino)");
    rec_cmd->add_option("--spacing", rec_spacing, "detector spacing in pixels")
        ->check(CLI::PositiveNumber);
    rec_cmd->add_option("--sweeps", art_cfg.num_sweeps, "ART sweep count")
        ->check(CLI::PositiveNumber);
    rec_cmd->add_option("--relax", art_cfg.relaxation, "ART relaxation in (0,2)")
        ->check(CLI::Range(1e-6, 2.0 - 1e-6));
    rec_cmd->add_option("--reg-weight", art_cfg.reg_weight, "regularization weight")
        ->check(CLI::NonNegativeNumber);
    rec_cmd->add_option("--reg-step", art_cfg.reg_step, "regularization step size")
        ->check(CLI::PositiveNumber);
    rec_cmd->add_option("--n", art_cfg.eagle_cfg.patch_size, "eagle patch size")
        ->check(CLI::PositiveNumber);
    rec_cmd->add_option("--kappa", art_cfg.eagle_cfg.kappa, "eagle high-pass cutoff")
        ->check(CLI::NonNegativeNumber);
    rec_cmd->add_flag("--nonneg", art_cfg.nonnegativity, "clamp the iterate at zero");
    rec_cmd->add_option("--shuffle-seed", rec_shuffle, "randomized row order seed (-1 = ordered)");
    rec_cmd->add_option("--log", rec_log, "per-sweep CSV log path");
    rec_cmd->add_option("--pgm", rec_pgm, "8-bit preview path (window [0,1])");
    rec_cmd->callback([&] {
        const Sinogram sino = load_sinogram(rec_sino, rec_spacing);
        std::optional<Image> gt;
        if (!rec_gt.empty()) gt = read_image(rec_gt);
        int out_size = rec_size;
        if (out_size == 0 && gt.has_value()) out_size = gt->width;
        if (out_size == 0) {
            throw ConfigError("reconstruct: provide --size or --gt to fix the output size");
        }

        Image rec;
        std::vector<SweepStats> log;
        if (rec_method == "fbp") {
            if (rec_reg != "none") {
                throw ConfigError("reconstruct: --reg applies to --method art only");
            }
            rec = fbp_reconstruct(sino, sino.geometry, out_size);
        } else {
            art_cfg.reg_kind = parse_reg(rec_reg);
            if (rec_shuffle >= 0) {
                art_cfg.shuffle_seed = static_cast<std::uint64_t>(rec_shuffle);
            }
            std::optional<Image> reference;
            if (art_cfg.reg_kind == RegKind::eagle && art_cfg.reg_weight > 0.0) {
                reference = rec_reference.empty() ? fbp_reconstruct(sino, sino.geometry, out_size)
                                                  : read_image(rec_reference);
            }
            auto result = art_reconstruct(sino, sino.geometry, art_cfg, out_size,
                                          reference.has_value() ? &*reference : nullptr);
            rec = std::move(result.first);
            log = std::move(result.second);
        }

        write_image(rec_out, rec, rec_method + " reconstruction, reg=" + rec_reg);
        if (!rec_pgm.empty()) export_pgm(rec_pgm, rec, 0.0, 1.0);
        if (!rec_log.empty()) {
            std::vector<std::vector<std::string>> rows;
            for (const SweepStats& s : log) {
                rows.push_back({std::to_string(s.sweep), format_double(s.data_residual),
                                format_double(s.reg_value)});
            }
            write_csv(rec_log, {"sweep", "data_residual", "reg_value"}, rows);
        }
        if (gt.has_value()) {
            const MetricReport report = evaluate(rec, *gt);
            print_csv({"psnr_db", "ssim", "data_range"},
                      {{format_double(report.psnr_db), format_double(report.ssim),
                        format_double(report.data_range)}});
        }
    });

    // ---- train-filter ----
    auto* train_cmd =
        app.add_subcommand("train-filter", "fit the reconstruction filter by gradient descent");
    int tr_epochs = 30;
    double tr_lr = 1.0;
    EagleConfig tr_cfg;
    int tr_size = 129;
    int tr_angles = 180;
    int tr_count = 8;
    double tr_sigma = 0.0;
    std::uint64_t tr_seed = 1;
    int tr_coeffs = 63;
    std::string tr_out_coeffs = "tf_coeffs.csv";
    std::string tr_log = "tf_train_log.csv";
    std::string tr_response;
    train_cmd->add_option("--epochs", tr_epochs, "training epochs")->check(CLI::PositiveNumber);
    train_cmd->add_option("--lr", tr_lr, "initial learning rate")->check(CLI::PositiveNumber);
    train_cmd->add_option("--kappa", tr_cfg.kappa, "eagle high-pass cutoff")
        ->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--n", tr_cfg.patch_size, "eagle patch size")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--lambda", tr_cfg.lambda_weight, "spectral term weight")
        ->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--size", tr_size, "phantom side length")->check(CLI::Range(8, 4096));
    train_cmd->add_option("--angles", tr_angles, "projection angles")->check(CLI::PositiveNumber);
    train_cmd->add_option("--dataset-size", tr_count, "number of training phantoms")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--noise-sigma", tr_sigma, "sinogram noise sigma")
        ->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--seed", tr_seed, "dataset seed");
    train_cmd->add_option("--coeffs", tr_coeffs, "number of filter coefficients")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--out-coeffs", tr_out_coeffs, "learned coefficients CSV");
    train_cmd->add_option("--log", tr_log, "per-epoch loss CSV");
    train_cmd->add_option("--response-out", tr_response, "learned frequency response CSV");
    train_cmd->callback([&] {
        const auto dataset = make_training_set(tr_count, tr_size, tr_angles, tr_sigma, tr_seed);
        const TrainResult result = train_filter(dataset, tr_cfg, tr_epochs, tr_lr, tr_coeffs);
        std::vector<std::vector<std::string>> coeff_rows;
        for (std::size_t k = 0; k < result.coeffs.coeffs.size(); ++k) {
            coeff_rows.push_back({std::to_string(k), format_double(result.coeffs.coeffs[k])});
        }
        write_csv(tr_out_coeffs, {"index", "coefficient"}, coeff_rows);
        std::vector<std::vector<std::string>> log_rows;
        for (const EpochStats& e : result.log) {
            log_rows.push_back({std::to_string(e.epoch), format_double(e.total),
                                format_double(e.mse_term), format_double(e.eagle_term)});
        }
        write_csv(tr_log, {"epoch", "total", "mse", "eagle"}, log_rows);
        if (!tr_response.empty()) {
            write_response_csv(tr_response, filter_response(result.coeffs));
        }
    });

    // ---- ablate-kappa ----
    auto* abl_cmd =
        app.add_subcommand("ablate-kappa", "train one filter per cutoff and tabulate metrics");
    std::vector<double> abl_kappas;
    int abl_epochs = 20;
    double abl_lr = 1.0;
    int abl_size = 129;
    int abl_angles = 120;
    int abl_count = 4;
    double abl_sigma = 0.5;
    std::uint64_t abl_seed = 1;
    int abl_coeffs = 63;
    EagleConfig abl_cfg;
    std::string abl_dir;
    abl_cmd->add_option("--kappas", abl_kappas, "comma-separated cutoff list")
        ->required()
        ->delimiter(',');
    abl_cmd->add_option("--epochs", abl_epochs, "training epochs")->check(CLI::PositiveNumber);
    abl_cmd->add_option("--lr", abl_lr, "initial learning rate")->check(CLI::PositiveNumber);
    abl_cmd->add_option("--size", abl_size, "phantom side length")->check(CLI::Range(8, 4096));
    abl_cmd->add_option("--angles", abl_angles, "projection angles")->check(CLI::PositiveNumber);
    abl_cmd->add_option("--dataset-size", abl_count, "number of training phantoms")
        ->check(CLI::PositiveNumber);
    abl_cmd->add_option("--noise-sigma", abl_sigma, "sinogram noise sigma")
        ->check(CLI::NonNegativeNumber);
    abl_cmd->add_option("--seed", abl_seed, "dataset seed");
    abl_cmd->add_option("--coeffs", abl_coeffs, "number of filter coefficients")
        ->check(CLI::PositiveNumber);
    abl_cmd->add_option("--n", abl_cfg.patch_size, "eagle patch size")
        ->check(CLI::PositiveNumber);
    abl_cmd->add_option("--lambda", abl_cfg.lambda_weight, "spectral term weight")
        ->check(CLI::NonNegativeNumber);
    abl_cmd->add_option("--out-dir", abl_dir, "output directory")->required();
    abl_cmd->callback([&] {
        namespace fs = std::filesystem;
        fs::create_directories(abl_dir);
        const auto dataset =
            make_training_set(abl_count, abl_size, abl_angles, abl_sigma, abl_seed);
        const auto rows =
            kappa_ablation(dataset, abl_kappas, abl_epochs, abl_lr, abl_cfg, abl_coeffs);
        std::vector<std::vector<std::string>> table;
        for (const AblationRow& row : rows) {
            const std::string tag = format_double(row.kappa);
            const std::string response_csv =
                (fs::path(abl_dir) / ("response_kappa_" + tag + ".csv")).string();
            write_response_csv(response_csv, row.response);
            const Image rec = tf_fbp_reconstruct(dataset.front().sino,
                                                 dataset.front().sino.geometry, row.coeffs,
                                                 dataset.front().ground_truth.width);
            const std::string rec_path =
                (fs::path(abl_dir) / ("recon_kappa_" + tag + ".f32")).string();
            write_image(rec_path, rec, "sample-0 reconstruction at kappa=" + tag);
            export_pgm((fs::path(abl_dir) / ("recon_kappa_" + tag + ".pgm")).string(), rec, 0.0,
                       1.0);
            table.push_back({tag, format_double(row.psnr_db), format_double(row.ssim),
                             format_double(row.hf_energy), response_csv});
        }
        write_csv((fs::path(abl_dir) / "ablation.csv").string(),
                  {"kappa", "psnr_db", "ssim", "hf_energy", "response_csv"}, table);
    });

    try {
        apply_thread_env();
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
