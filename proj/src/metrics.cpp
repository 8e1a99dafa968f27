#include "eagle/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace eagle {

double psnr(const Image& a, const Image& b, double data_range) {
    require_same_shape(a, b, "psnr");
    if (!(data_range > 0.0)) throw ParameterError("psnr: data_range must be > 0");
    double mse = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const double d = a.samples[i] - b.samples[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.samples.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(data_range * data_range / mse);
}

double ssim(const Image& a, const Image& b, double data_range) {
    require_same_shape(a, b, "ssim");
    if (a.width < 7 || a.height < 7) {
        throw DimensionError("ssim: images must be at least 7x7");
    }
    if (!(data_range > 0.0)) throw ParameterError("ssim: data_range must be > 0");
    const double c1 = (0.01 * data_range) * (0.01 * data_range);
    const double c2 = (0.03 * data_range) * (0.03 * data_range);
    constexpr int win = 7;
    constexpr double inv_area = 1.0 / (win * win);
    const int rows = a.height - win + 1;
    const int cols = a.width - win + 1;

    std::vector<double> row_sums(rows, 0.0);
#pragma omp parallel for
    for (int r0 = 0; r0 < rows; ++r0) {
        double acc = 0.0;
        for (int c0 = 0; c0 < cols; ++c0) {
            double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
            for (int i = 0; i < win; ++i) {
                for (int j = 0; j < win; ++j) {
                    const double x = a.at(r0 + i, c0 + j);
                    const double y = b.at(r0 + i, c0 + j);
                    sa += x;
                    sb += y;
                    saa += x * x;
                    sbb += y * y;
                    sab += x * y;
                }
            }
            const double ma = sa * inv_area;
            const double mb = sb * inv_area;
            const double va = saa * inv_area - ma * ma;
            const double vb = sbb * inv_area - mb * mb;
            const double cov = sab * inv_area - ma * mb;
            const double numer = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
            const double denom = (ma * ma + mb * mb + c1) * (va + vb + c2);
            acc += numer / denom;
        }
        row_sums[r0] = acc;
    }
    double total = 0.0;
    for (double s : row_sums) total += s;
    return total / (static_cast<double>(rows) * cols);
}

MetricReport evaluate(const Image& rec, const Image& gt) {
    const double range = max_sample(gt) - min_sample(gt);
    if (!(range > 0.0)) {
        throw ParameterError("evaluate: ground truth has zero intensity range");
    }
    return evaluate(rec, gt, range);
}

MetricReport evaluate(const Image& rec, const Image& gt, double data_range) {
    MetricReport report;
    report.data_range = data_range;
    report.psnr_db = psnr(rec, gt, data_range);
    report.ssim = ssim(rec, gt, data_range);
    return report;
}

} // namespace eagle
