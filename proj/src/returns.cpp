#include "rmtx/returns.hpp"

#include "rmtx/error.hpp"

#include <cmath>
#include <limits>

namespace rmtx {

namespace {

struct RowMoments {
    double mean;
    double sigma;
};

// Two-pass mean with a correction sweep, then population deviation.
RowMoments row_moments(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    const auto count = static_cast<double>(row.size());
    double mean = 0.0;
    for (Eigen::Index t = 0; t < row.size(); ++t) {
        mean += row(t);
    }
    mean /= count;
    double correction = 0.0;
    for (Eigen::Index t = 0; t < row.size(); ++t) {
        correction += row(t) - mean;
    }
    mean += correction / count;
    double sum_sq = 0.0;
    for (Eigen::Index t = 0; t < row.size(); ++t) {
        const double d = row(t) - mean;
        sum_sq += d * d;
    }
    return {mean, std::sqrt(sum_sq / count)};
}

}  // namespace

ReturnPanel make_return_panel(std::vector<std::string> tickers, Eigen::MatrixXd returns) {
    if (static_cast<Eigen::Index>(tickers.size()) != returns.rows()) {
        throw Error("returns", "got " + std::to_string(tickers.size()) + " tickers for " +
                                   std::to_string(returns.rows()) + " return series");
    }
    if (returns.cols() < 1) {
        throw Error("returns", "return series are empty");
    }
    ReturnPanel panel{std::move(tickers), std::move(returns), {}, {}};
    panel.means.resize(panel.returns.rows());
    panel.volatilities.resize(panel.returns.rows());
    for (Eigen::Index i = 0; i < panel.returns.rows(); ++i) {
        const auto moments = row_moments(panel.returns.row(i));
        panel.means(i) = moments.mean;
        panel.volatilities(i) = moments.sigma;
    }
    return panel;
}

ReturnPanel log_returns(const AlignedPanel& panel) {
    const auto dates = static_cast<Eigen::Index>(panel.num_dates());
    if (dates < 2) {
        throw Error("returns", "need at least 2 dates to form a return, got " +
                                   std::to_string(dates));
    }
    const auto n = static_cast<Eigen::Index>(panel.num_tickers());
    Eigen::MatrixXd returns(n, dates - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index t = 0; t + 1 < dates; ++t) {
            const double now = panel.prices(t, i);
            const double next = panel.prices(t + 1, i);
            if (!(now > 0.0 && next > 0.0)) {
                throw Error("returns", "non-positive price for ticker '" +
                                           panel.tickers[static_cast<std::size_t>(i)] + "'");
            }
            returns(i, t) = std::log(next) - std::log(now);
        }
    }
    return make_return_panel(panel.tickers, std::move(returns));
}

NormalizedPanel normalize(const ReturnPanel& panel) {
    constexpr double kNoiseFactor = 64.0 * std::numeric_limits<double>::epsilon();
    NormalizedPanel out{panel.tickers, Eigen::MatrixXd(panel.returns.rows(), panel.returns.cols())};
    for (Eigen::Index i = 0; i < panel.returns.rows(); ++i) {
        const double sigma = panel.volatilities(i);
        const double scale = panel.returns.row(i).cwiseAbs().maxCoeff();
        if (!(sigma > kNoiseFactor * scale)) {
            throw Error("returns", "ticker '" + panel.tickers[static_cast<std::size_t>(i)] +
                                       "' has zero volatility (constant price series)");
        }
        auto row = out.normalized.row(i);
        for (Eigen::Index t = 0; t < panel.returns.cols(); ++t) {
            row(t) = (panel.returns(i, t) - panel.means(i)) / sigma;
        }
        // When |mean| >> sigma the subtraction above leaves rounding of order
        // eps * |mean| / sigma; one more pass restores mean 0 and variance 1.
        const auto residual = row_moments(row);
        for (Eigen::Index t = 0; t < row.size(); ++t) {
            row(t) = (row(t) - residual.mean) / residual.sigma;
        }
    }
    return out;
}

std::vector<VolatilityEntry> volatility_report(const ReturnPanel& panel) {
    std::vector<VolatilityEntry> out;
    out.reserve(panel.tickers.size());
    for (std::size_t i = 0; i < panel.tickers.size(); ++i) {
        out.push_back({panel.tickers[i], panel.volatilities(static_cast<Eigen::Index>(i))});
    }
    return out;
}

}  // namespace rmtx
