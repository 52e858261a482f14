#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "rmtx/correlation.hpp"
#include "rmtx/error.hpp"
#include "support.hpp"

using namespace rmtx;

namespace {

CorrelationMatrix from_rows(const Eigen::MatrixXd& raw) {
    return correlation_matrix(normalize(
        make_return_panel(testing::tickers(static_cast<std::size_t>(raw.rows())), raw)));
}

CorrelationMatrix constant_offdiagonal(Eigen::Index n, double value) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, value);
    c.diagonal().setOnes();
    return {testing::tickers(static_cast<std::size_t>(n)), c};
}

}  // namespace

TEST_CASE("perfectly (anti)correlated pairs") {
    Eigen::MatrixXd raw(2, 50);
    raw.row(0) = testing::gaussian_matrix(1, 50, 3);
    raw.row(1) = raw.row(0);
    CHECK(from_rows(raw).values(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    raw.row(1) = -raw.row(0);
    CHECK(from_rows(raw).values(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("independent series at T = 388 against a dot-product oracle") {
    const Eigen::MatrixXd raw = testing::gaussian_matrix(2, 388, 388);
    const auto np = normalize(make_return_panel({"A", "B"}, raw));
    const auto c = correlation_matrix(np);
    CHECK(std::abs(c.values(0, 1)) < 0.15);
    const double dot = np.normalized.row(0).dot(np.normalized.row(1)) / 388.0;
    CHECK(std::abs(c.values(0, 1) - dot) < 1e-12);

    const std::vector<double> x(raw.row(0).begin(), raw.row(0).end());
    const std::vector<double> y(raw.row(1).begin(), raw.row(1).end());
    CHECK(std::abs(c.values(0, 1) - oracle::pearson(x, y)) < 1e-12);
}

TEST_CASE("matches the naive triple loop and keeps its invariants") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto np = normalize(
            make_return_panel(testing::tickers(5), testing::gaussian_matrix(5, 50, 1000 + seed)));
        const auto c = correlation_matrix(np);
        CHECK((c.values - oracle::naive_correlation(np.normalized)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(c.values == c.values.transpose());
        CHECK((c.values.diagonal().array() - 1.0).abs().maxCoeff() < 1e-10);
        CHECK(c.values.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c.values);
        CHECK(solver.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("relabeling tickers permutes C consistently") {
    const Eigen::MatrixXd raw = testing::gaussian_matrix(6, 80, 17);
    const std::vector<Eigen::Index> perm{3, 0, 5, 1, 4, 2};
    Eigen::MatrixXd permuted(6, 80);
    for (Eigen::Index i = 0; i < 6; ++i) {
        permuted.row(i) = raw.row(perm[static_cast<std::size_t>(i)]);
    }
    const auto c = from_rows(raw);
    const auto cp = from_rows(permuted);
    for (Eigen::Index i = 0; i < 6; ++i) {
        for (Eigen::Index j = 0; j < 6; ++j) {
            CHECK(cp.values(i, j) ==
                  c.values(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]));
        }
    }
}

TEST_CASE("coefficient_stats on constant structures") {
    const auto identity = coefficient_stats(constant_offdiagonal(3, 0.0));
    CHECK(identity.count == 3);
    CHECK(identity.mean == 0.0);
    CHECK(identity.std_dev == 0.0);

    const auto half = coefficient_stats(constant_offdiagonal(5, 0.5));
    CHECK(half.count == 10);
    CHECK(half.mean == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(half.std_dev < 1e-15);
}

TEST_CASE("coefficient_stats histogram and flat recomputation") {
    const auto c = from_rows(testing::gaussian_matrix(30, 60, 77));
    for (double width : {0.05, 0.1, 0.3, 0.7}) {
        const auto stats = coefficient_stats(c, width);
        double area = 0.0;
        for (const auto& bin : stats.histogram) {
            CHECK(bin.density >= 0.0);
            area += bin.density * width;
        }
        CHECK(std::abs(area - 1.0) < 1e-9);
        CHECK(stats.histogram.front().center == doctest::Approx(-1.0 + width / 2));
    }
    CHECK(coefficient_stats(c).histogram.size() == 40);

    std::vector<double> flat;
    for (Eigen::Index i = 0; i < 30; ++i) {
        for (Eigen::Index j = i + 1; j < 30; ++j) {
            flat.push_back(c.values(i, j));
        }
    }
    long double sum = 0;
    for (double v : flat) {
        sum += v;
    }
    const double mean = static_cast<double>(sum / flat.size());
    long double ss = 0;
    for (double v : flat) {
        ss += (v - mean) * (v - mean);
    }
    const auto stats = coefficient_stats(c);
    CHECK(stats.count == flat.size());
    CHECK(std::abs(stats.mean - mean) < 1e-12);
    CHECK(std::abs(stats.std_dev - static_cast<double>(std::sqrt(ss / flat.size()))) < 1e-12);
}

TEST_CASE("coefficient_stats errors") {
    const auto c = constant_offdiagonal(3, 0.2);
    CHECK_THROWS_WITH_AS(coefficient_stats(c, 0.0), doctest::Contains("bin width"), Error);
    CHECK_THROWS_AS(coefficient_stats(c, -0.1), Error);
    CHECK_THROWS_AS(coefficient_stats(constant_offdiagonal(1, 0.0)), Error);
}

TEST_CASE("boundary coefficients land in the end bins") {
    const auto bins = density_histogram({-1.0, 1.0, 1.0 + 1e-13}, -1.0, 0.5, 4);
    CHECK(bins[0].density == doctest::Approx(1.0 / 3 / 0.5));
    CHECK(bins[3].density == doctest::Approx(2.0 / 3 / 0.5));
}
