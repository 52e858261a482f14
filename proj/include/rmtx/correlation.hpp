#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmtx/returns.hpp"

namespace rmtx {

struct CorrelationMatrix {
    std::vector<std::string> tickers;
    Eigen::MatrixXd values;  // N x N, symmetric

    Eigen::Index size() const noexcept { return values.rows(); }
};

struct HistogramBin {
    double center;
    double density;
};

/// Distribution of the off-diagonal (upper triangle) coefficients.
struct CoefficientStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // population
    double bin_width = 0.0;
    std::vector<HistogramBin> histogram;  // over [-1, 1], unit area
};

inline constexpr double kDefaultBinWidth = 0.05;

/// C_ij = (1/T) sum_t r_i(t) r_j(t). Each upper-triangle entry is summed
/// once in time order and mirrored, so C is exactly symmetric.
CorrelationMatrix correlation_matrix(const NormalizedPanel& panel);

CoefficientStats coefficient_stats(const CorrelationMatrix& matrix,
                                   double bin_width = kDefaultBinWidth);

/// Upper-triangle off-diagonal entries in row-major order.
std::vector<double> off_diagonal_coefficients(const CorrelationMatrix& matrix);

/// Density histogram of `values` on [lo, lo + bins * width). Values outside
/// are clamped into the first/last bin. Densities integrate to 1.
std::vector<HistogramBin> density_histogram(const std::vector<double>& values, double lo,
                                            double width, std::size_t bins);

}  // namespace rmtx
