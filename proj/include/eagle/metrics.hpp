#pragma once

#include "eagle/image.hpp"

namespace eagle {

struct MetricReport {
    double psnr_db = 0.0;
    double ssim = 0.0;
    double data_range = 0.0;
};

/// 10*log10(data_range^2 / MSE); +infinity when the images are identical.
double psnr(const Image& a, const Image& b, double data_range);

/// Mean local SSIM over all fully-contained 7x7 uniform windows,
/// C1 = (0.01*data_range)^2, C2 = (0.03*data_range)^2.
double ssim(const Image& a, const Image& b, double data_range);

/// PSNR and SSIM of rec vs gt; data_range defaults to max(gt) - min(gt).
MetricReport evaluate(const Image& rec, const Image& gt);
MetricReport evaluate(const Image& rec, const Image& gt, double data_range);

} // namespace eagle
