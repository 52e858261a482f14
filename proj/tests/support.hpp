#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "rmtx/ingest.hpp"
#include "rmtx/random.hpp"
#include "rmtx/returns.hpp"

namespace testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("rmtx-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::vector<std::string> tickers(std::size_t n, const std::string& prefix = "T") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(prefix + std::to_string(i + 1));
    }
    return out;
}

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    rmtx::BoxMullerNormal normal(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = normal();
        }
    }
    return m;
}

/// Returns from factor loadings: r_i(t) = sum_f loading(i, f) g_f(t) + noise * e_i(t).
inline rmtx::ReturnPanel factor_panel(const Eigen::MatrixXd& loadings, Eigen::Index length,
                                      double noise, std::uint64_t seed) {
    const Eigen::MatrixXd factors = gaussian_matrix(loadings.cols(), length, seed);
    const Eigen::MatrixXd idio = gaussian_matrix(loadings.rows(), length, seed ^ 0xABCDEF);
    Eigen::MatrixXd returns = loadings * factors + noise * idio;
    return rmtx::make_return_panel(tickers(static_cast<std::size_t>(loadings.rows())),
                                   std::move(returns));
}

/// Dense aligned panel of prices built from a return matrix (N x T),
/// starting at 100 on consecutive calendar days from 2008-01-01.
inline rmtx::AlignedPanel prices_from_returns(const Eigen::MatrixXd& returns,
                                              rmtx::Date start = std::chrono::year{2008} /
                                                                 std::chrono::January /
                                                                 std::chrono::day{1}) {
    rmtx::AlignedPanel panel;
    panel.tickers = tickers(static_cast<std::size_t>(returns.rows()));
    panel.prices.resize(returns.cols() + 1, returns.rows());
    std::chrono::sys_days day{start};
    for (Eigen::Index t = 0; t <= returns.cols(); ++t) {
        panel.dates.push_back(rmtx::Date{day});
        day += std::chrono::days{1};
        for (Eigen::Index i = 0; i < returns.rows(); ++i) {
            panel.prices(t, i) = t == 0 ? 100.0 : panel.prices(t - 1, i) * std::exp(returns(i, t - 1));
        }
    }
    return panel;
}

}  // namespace testing
