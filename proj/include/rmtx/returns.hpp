#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmtx/ingest.hpp"

namespace rmtx {

/// Log returns, one row per series. `means` and `volatilities` are the
/// time average and population standard deviation (divide by T) of each row.
struct ReturnPanel {
    std::vector<std::string> tickers;
    Eigen::MatrixXd returns;  // N x T
    Eigen::VectorXd means;
    Eigen::VectorXd volatilities;

    Eigen::Index num_series() const noexcept { return returns.rows(); }
    Eigen::Index num_observations() const noexcept { return returns.cols(); }
};

/// Returns demeaned and scaled to unit population variance per row.
struct NormalizedPanel {
    std::vector<std::string> tickers;
    Eigen::MatrixXd normalized;  // N x T
};

struct VolatilityEntry {
    std::string ticker;
    double sigma;
};

/// Wraps an N x T matrix of returns, computing per-row means and
/// population volatilities.
ReturnPanel make_return_panel(std::vector<std::string> tickers, Eigen::MatrixXd returns);

/// R_i(t) = ln P_i(t+1) - ln P_i(t), giving T = dates - 1 observations.
ReturnPanel log_returns(const AlignedPanel& panel);

/// r_i(t) = (R_i(t) - <R_i>) / sigma_i. Rejects series whose volatility is
/// zero (or indistinguishable from rounding noise) naming the ticker.
NormalizedPanel normalize(const ReturnPanel& panel);

std::vector<VolatilityEntry> volatility_report(const ReturnPanel& panel);

}  // namespace rmtx
