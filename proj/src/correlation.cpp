#include "rmtx/correlation.hpp"

#include "rmtx/error.hpp"

#include <algorithm>
#include <cmath>

namespace rmtx {

CorrelationMatrix correlation_matrix(const NormalizedPanel& panel) {
    const Eigen::Index n = panel.normalized.rows();
    const Eigen::Index t_len = panel.normalized.cols();
    if (t_len < 2) {
        throw Error("correlation", "need at least 2 observations, got " + std::to_string(t_len));
    }
    const double inv_t = 1.0 / static_cast<double>(t_len);
    CorrelationMatrix out{panel.tickers, Eigen::MatrixXd(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            double sum = 0.0;
            for (Eigen::Index t = 0; t < t_len; ++t) {
                sum += panel.normalized(i, t) * panel.normalized(j, t);
            }
            out.values(i, j) = sum * inv_t;
            out.values(j, i) = out.values(i, j);
        }
    }
    return out;
}

std::vector<double> off_diagonal_coefficients(const CorrelationMatrix& matrix) {
    const Eigen::Index n = matrix.size();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            out.push_back(matrix.values(i, j));
        }
    }
    return out;
}

std::vector<HistogramBin> density_histogram(const std::vector<double>& values, double lo,
                                            double width, std::size_t bins) {
    if (!(width > 0.0) || bins == 0) {
        throw Error("correlation", "histogram needs a positive bin width and at least one bin");
    }
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        const double position = std::floor((v - lo) / width);
        const auto index = static_cast<std::size_t>(
            std::clamp(position, 0.0, static_cast<double>(bins - 1)));
        ++counts[index];
    }
    std::vector<HistogramBin> out(bins);
    const double total = static_cast<double>(values.size());
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].center = lo + (static_cast<double>(b) + 0.5) * width;
        out[b].density = values.empty() ? 0.0 : static_cast<double>(counts[b]) / (total * width);
    }
    return out;
}

CoefficientStats coefficient_stats(const CorrelationMatrix& matrix, double bin_width) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw Error("correlation", "bin width must be positive, got " + std::to_string(bin_width));
    }
    if (matrix.size() < 2) {
        throw Error("correlation", "coefficient statistics need N >= 2");
    }
    const auto values = off_diagonal_coefficients(matrix);

    CoefficientStats stats;
    stats.count = values.size();
    stats.bin_width = bin_width;
    const double count = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    stats.mean = sum / count;
    double sum_sq = 0.0;
    for (double v : values) {
        sum_sq += (v - stats.mean) * (v - stats.mean);
    }
    stats.std_dev = std::sqrt(sum_sq / count);

    // Bins start at -1; the last bin may extend past +1 when 2 / width is
    // not an integer.
    const auto bins = static_cast<std::size_t>(std::ceil(2.0 / bin_width - 1e-9));
    stats.histogram = density_histogram(values, -1.0, bin_width, std::max<std::size_t>(bins, 1));
    return stats;
}

}  // namespace rmtx
