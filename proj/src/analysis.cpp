#include "rmtx/analysis.hpp"

#include "rmtx/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

namespace rmtx {

double inverse_participation_ratio(std::span<const double> vector) {
    double sum = 0.0;
    for (double u : vector) {
        const double sq = u * u;
        sum += sq * sq;
    }
    return sum;
}

std::vector<IPREntry> ipr(const SpectralDecomposition& decomposition) {
    const Eigen::Index n = decomposition.size();
    std::vector<IPREntry> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto column = decomposition.eigenvectors.col(k);
        const double value = inverse_participation_ratio(
            std::span<const double>(column.data(), static_cast<std::size_t>(n)));
        out.push_back({static_cast<std::size_t>(k + 1), decomposition.eigenvalues(k), value,
                       1.0 / value});
    }
    return out;
}

namespace {

void check_rank(const SpectralDecomposition& decomposition, std::size_t rank,
                const char* module) {
    if (rank < 1 || rank > static_cast<std::size_t>(decomposition.size())) {
        throw Error(module, "rank " + std::to_string(rank) + " is outside 1.." +
                                std::to_string(decomposition.size()));
    }
}

}  // namespace

VectorComparison compare_vectors(const SpectralDecomposition& a, const SpectralDecomposition& b,
                                 std::size_t rank, double floor) {
    const std::set<std::string> tickers_a(a.tickers.begin(), a.tickers.end());
    const std::set<std::string> tickers_b(b.tickers.begin(), b.tickers.end());
    if (tickers_a != tickers_b || a.tickers.size() != b.tickers.size()) {
        std::vector<std::string> difference;
        std::set_symmetric_difference(tickers_a.begin(), tickers_a.end(), tickers_b.begin(),
                                      tickers_b.end(), std::back_inserter(difference));
        std::string listed;
        for (const auto& ticker : difference) {
            listed += (listed.empty() ? "" : ", ") + ticker;
        }
        throw Error("analysis", "ticker sets differ: " + (listed.empty() ? "duplicates" : listed));
    }
    check_rank(a, rank, "analysis");
    check_rank(b, rank, "analysis");
    if (!(floor >= 0.0)) {
        throw Error("analysis", "magnitude floor must be >= 0");
    }

    std::unordered_map<std::string, Eigen::Index> index_b;
    for (std::size_t i = 0; i < b.tickers.size(); ++i) {
        index_b.emplace(b.tickers[i], static_cast<Eigen::Index>(i));
    }
    const auto column = static_cast<Eigen::Index>(rank - 1);
    std::vector<double> values_b(a.tickers.size());
    double dot = 0.0;
    for (std::size_t i = 0; i < a.tickers.size(); ++i) {
        values_b[i] = b.eigenvectors(index_b.at(a.tickers[i]), column);
        dot += a.eigenvectors(static_cast<Eigen::Index>(i), column) * values_b[i];
    }

    VectorComparison out{rank, floor, dot < 0.0, {}, 0, 0.0};
    for (std::size_t i = 0; i < a.tickers.size(); ++i) {
        const double va = a.eigenvectors(static_cast<Eigen::Index>(i), column);
        const double vb = out.b_reoriented ? -values_b[i] : values_b[i];
        ComponentStatus status = ComponentStatus::same;
        if (std::abs(va) < floor || std::abs(vb) < floor || va * vb == 0.0) {
            status = ComponentStatus::indeterminate;
        } else if (va * vb < 0.0) {
            status = ComponentStatus::flipped;
            ++out.flipped_count;
        }
        out.components.push_back({a.tickers[i], va, vb, status});
    }
    out.flipped_fraction =
        static_cast<double>(out.flipped_count) / static_cast<double>(a.tickers.size());
    return out;
}

std::vector<RankedComponent> top_components(const SpectralDecomposition& decomposition,
                                            std::size_t rank, std::size_t top_k) {
    check_rank(decomposition, rank, "analysis");
    const auto column = decomposition.eigenvectors.col(static_cast<Eigen::Index>(rank - 1));
    std::vector<std::size_t> order(decomposition.tickers.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(column(static_cast<Eigen::Index>(x))) >
               std::abs(column(static_cast<Eigen::Index>(y)));
    });
    order.resize(std::min(top_k, order.size()));
    std::vector<RankedComponent> out;
    out.reserve(order.size());
    for (std::size_t i : order) {
        out.push_back({decomposition.tickers[i], column(static_cast<Eigen::Index>(i))});
    }
    return out;
}

WindowReport build_report(const WindowSpec& window, const AlignedPanel& aligned,
                          const ReportConfig& config) {
    try {
        WindowReport report;
        report.window = window;
        const auto panel = slice_window(aligned, window);
        report.tickers = panel.tickers;
        report.num_dates = panel.num_dates();
        report.num_filled = panel.fill_log.size();

        const auto returns = log_returns(panel);
        report.num_observations = static_cast<std::size_t>(returns.num_observations());
        report.volatilities = volatility_report(returns);

        report.correlation = correlation_matrix(normalize(returns));
        report.coefficients = coefficient_stats(report.correlation, config.bin_width);
        report.spectrum = eigendecompose(report.correlation);

        report.mp = mp_bounds(static_cast<double>(report.num_observations) /
                              static_cast<double>(report.num_series()));
        report.classification = classify_spectrum(report.spectrum, report.mp);

        const auto ranks = std::min<std::size_t>(config.vector_ranks, report.num_series());
        for (std::size_t rank = 1; rank <= ranks; ++rank) {
            report.eigenvector_tables.push_back(
                {rank, report.spectrum.eigenvalues(static_cast<Eigen::Index>(rank - 1)),
                 top_components(report.spectrum, rank, config.top_k)});
        }
        report.ipr = ipr(report.spectrum);
        return report;
    } catch (const Error& error) {
        throw Error("analysis", "window '" + window.name + "': " + error.what());
    }
}

}  // namespace rmtx
