#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rmtx/error.hpp"
#include "rmtx/returns.hpp"
#include "support.hpp"

using namespace rmtx;

namespace {

AlignedPanel single_series(const std::vector<double>& prices) {
    Eigen::MatrixXd returns(1, static_cast<Eigen::Index>(prices.size()) - 1);
    auto panel = testing::prices_from_returns(returns.setZero());
    for (std::size_t t = 0; t < prices.size(); ++t) {
        panel.prices(static_cast<Eigen::Index>(t), 0) = prices[t];
    }
    return panel;
}

ReturnPanel one_row(std::initializer_list<double> values) {
    Eigen::MatrixXd m(1, static_cast<Eigen::Index>(values.size()));
    Eigen::Index t = 0;
    for (double v : values) {
        m(0, t++) = v;
    }
    return make_return_panel({"X"}, m);
}

}  // namespace

TEST_CASE("log returns of simple price paths") {
    SUBCASE("constant prices") {
        const auto rp = log_returns(single_series({100, 100, 100}));
        CHECK(rp.num_observations() == 2);
        CHECK(rp.returns(0, 0) == 0.0);
        CHECK(rp.returns(0, 1) == 0.0);
        CHECK(rp.volatilities(0) == 0.0);
    }
    SUBCASE("1 to e") {
        const auto rp = log_returns(single_series({1.0, std::numbers::e}));
        CHECK(rp.returns(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("100 to 110") {
        // ln(1.1), evaluated independently.
        const auto rp = log_returns(single_series({100, 110}));
        CHECK(rp.returns(0, 0) == doctest::Approx(0.09531017980432493).epsilon(1e-14));
    }
    SUBCASE("too short") {
        CHECK_THROWS_WITH_AS(log_returns(single_series({100})), doctest::Contains("at least 2"),
                             Error);
    }
}

TEST_CASE("normalize [1, 2, 3]") {
    const auto np = normalize(one_row({1, 2, 3}));
    // population sigma = sqrt(2/3), so the ends sit at +/- sqrt(3/2)
    CHECK(np.normalized(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-14));
    CHECK(std::abs(np.normalized(0, 1)) < 1e-15);
    CHECK(np.normalized(0, 2) == doctest::Approx(1.224744871391589).epsilon(1e-14));
}

TEST_CASE("normalize rejects a constant series by name") {
    CHECK_THROWS_WITH_AS(normalize(one_row({0.01, 0.01, 0.01})),
                         doctest::Contains("ticker 'X' has zero volatility"), Error);
    CHECK_THROWS_AS(normalize(log_returns(single_series({5, 5, 5, 5}))), Error);
}

TEST_CASE("volatility report") {
    const auto alternating = one_row({-1, 1, -1, 1, -1, 1});
    const auto table = volatility_report(alternating);
    REQUIRE(table.size() == 1);
    CHECK(table[0].ticker == "X");
    CHECK(table[0].sigma == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(volatility_report(log_returns(single_series({7, 7, 7})))[0].sigma == 0.0);

    // Monte Carlo: sigma_true = 0.02 over 10000 draws.
    const Eigen::MatrixXd draws = 0.02 * testing::gaussian_matrix(1, 10000, 2024);
    const auto sigma = volatility_report(make_return_panel({"G"}, draws))[0].sigma;
    CHECK(std::abs(sigma - 0.02) < 0.001);
}

TEST_CASE("normalized rows have zero mean, unit variance, and are a fixed point") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Eigen::Index t_len = 2 + static_cast<Eigen::Index>(seed * 37 % 500);
        Eigen::MatrixXd raw = testing::gaussian_matrix(4, t_len, seed);
        raw.row(0) = raw.row(0) * 1e-4 + Eigen::RowVectorXd::Constant(t_len, 3.0);
        raw.row(1) *= 250.0;
        const auto np = normalize(make_return_panel(testing::tickers(4), raw));
        for (Eigen::Index i = 0; i < 4; ++i) {
            const double mean = np.normalized.row(i).mean();
            const double second_moment = np.normalized.row(i).squaredNorm() / t_len;
            CHECK(std::abs(mean) < 1e-12);
            CHECK(std::abs(std::sqrt(second_moment) - 1.0) < 1e-12);
            CHECK(std::abs(second_moment - 1.0) < 1e-12);
        }
        const auto again = normalize(make_return_panel(np.tickers, np.normalized));
        CHECK((again.normalized - np.normalized).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("scaling a ticker's prices leaves its log returns unchanged") {
    auto panel = testing::prices_from_returns(0.01 * testing::gaussian_matrix(3, 60, 5));
    const auto before = log_returns(panel);
    panel.prices.col(1) *= 37.5;
    const auto after = log_returns(panel);
    CHECK((after.returns - before.returns).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("make_return_panel checks shape") {
    CHECK_THROWS_AS(make_return_panel({"A"}, Eigen::MatrixXd::Zero(2, 3)), Error);
    CHECK_THROWS_AS(make_return_panel({"A"}, Eigen::MatrixXd::Zero(1, 0)), Error);
}
