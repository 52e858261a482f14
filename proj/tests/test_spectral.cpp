#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rmtx/error.hpp"
#include "rmtx/spectral.hpp"
#include "support.hpp"

using namespace rmtx;

namespace {

CorrelationMatrix random_correlation(Eigen::Index n, Eigen::Index length, std::uint64_t seed) {
    return correlation_matrix(normalize(make_return_panel(
        testing::tickers(static_cast<std::size_t>(n)), testing::gaussian_matrix(n, length, seed))));
}

CorrelationMatrix wrap(const Eigen::MatrixXd& values) {
    return {testing::tickers(static_cast<std::size_t>(values.rows())), values};
}

void check_invariants(const CorrelationMatrix& c, const SpectralDecomposition& sd) {
    const auto& v = sd.eigenvectors;
    const Eigen::MatrixXd rebuilt = v * sd.eigenvalues.asDiagonal() * v.transpose();
    CHECK((rebuilt - c.values).cwiseAbs().maxCoeff() < 1e-8);
    const auto n = c.size();
    CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
    for (Eigen::Index k = 1; k < n; ++k) {
        CHECK(sd.eigenvalues(k - 1) >= sd.eigenvalues(k));
    }
    CHECK(std::abs(sd.eigenvalues.sum() - c.values.trace()) < 1e-6);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index largest = 0;
        v.col(k).cwiseAbs().maxCoeff(&largest);
        CHECK(v(largest, k) > 0.0);
    }
}

}  // namespace

TEST_CASE("identity has unit spectrum") {
    const auto sd = eigendecompose(wrap(Eigen::MatrixXd::Identity(4, 4)));
    CHECK(sd.eigenvalues == Eigen::VectorXd::Ones(4));
    CHECK(sd.eigenvectors == Eigen::MatrixXd::Identity(4, 4));
    CHECK(market_mode(sd).eigenvalue == 1.0);
    CHECK(sd.convention == kSpectralConvention);
}

TEST_CASE("2 x 2 correlation: eigenvalues 1 +/- rho") {
    Eigen::MatrixXd c(2, 2);
    c << 1.0, 0.5, 0.5, 1.0;
    const auto sd = eigendecompose(wrap(c));
    CHECK(sd.eigenvalues(0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(sd.eigenvalues(1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sd.eigenvectors(0, 0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(sd.eigenvectors(1, 0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("3 x 3 spectra match the characteristic polynomial roots") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto c = random_correlation(3, 4 + static_cast<Eigen::Index>(seed % 40), 500 + seed);
        const auto sd = eigendecompose(c);
        const auto roots = oracle::symmetric_3x3_eigenvalues(c.values);
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(sd.eigenvalues(k) - roots[static_cast<std::size_t>(k)]) < 1e-10);
        }
    }
}

TEST_CASE("random correlation matrices satisfy the decomposition invariants") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 30);
        // include rank-deficient cases with fewer observations than series
        const Eigen::Index length = n / 2 + 2 + static_cast<Eigen::Index>(seed % 3) * n;
        const auto c = random_correlation(n, length, seed);
        const auto sd = eigendecompose(c);
        CAPTURE(n);
        CAPTURE(length);
        check_invariants(c, sd);
        CHECK(sd.eigenvalues.minCoeff() >= -1e-10);
        CHECK(std::abs(sd.eigenvalues.sum() - static_cast<double>(n)) < 1e-6);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reference(c.values);
        CHECK((sd.eigenvalues.reverse() - reference.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("determinant equals the product of eigenvalues") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 5);
        const auto c = random_correlation(n, 3 * n, 900 + seed);
        const auto sd = eigendecompose(c);
        double product = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (sd.eigenvalues(k) > 0.0) {
                product *= sd.eigenvalues(k);
            }
        }
        CHECK(std::abs(product - oracle::lu_determinant(c.values)) < 1e-8);
    }
}

TEST_CASE("equicorrelated matrix (1 - rho) I + rho J") {
    for (const double rho : {0.1, 0.45, 0.9, -0.1}) {
        for (const Eigen::Index n : {3, 7, 20}) {
            if (rho < 0 && 1 + (n - 1) * rho < 0) {
                continue;
            }
            Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, rho);
            c.diagonal().setOnes();
            const auto sd = eigendecompose(wrap(c));
            const double top = 1.0 + static_cast<double>(n - 1) * rho;
            const double rest = 1.0 - rho;
            const double largest = std::max(top, rest);
            const double smallest = std::min(top, rest);
            CHECK(std::abs(sd.eigenvalues(0) - largest) < 1e-10);
            CHECK(std::abs(sd.eigenvalues(n - 1) - smallest) < 1e-10);
            const Eigen::Index multiple_from = rho > 0 ? 1 : 0;
            for (Eigen::Index k = multiple_from; k < multiple_from + n - 1; ++k) {
                CHECK(std::abs(sd.eigenvalues(k) - rest) < 1e-10);
            }
        }
    }
}

TEST_CASE("permuting tickers permutes eigenvectors") {
    const auto c = random_correlation(8, 40, 4242);
    const std::vector<Eigen::Index> perm{7, 2, 5, 0, 1, 6, 3, 4};
    Eigen::MatrixXd permuted(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i) {
        for (Eigen::Index j = 0; j < 8; ++j) {
            permuted(i, j) = c.values(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
    }
    const auto sd = eigendecompose(c);
    const auto sp = eigendecompose(wrap(permuted));
    CHECK((sd.eigenvalues - sp.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
    for (Eigen::Index k = 0; k < 8; ++k) {
        for (Eigen::Index i = 0; i < 8; ++i) {
            CHECK(std::abs(sp.eigenvectors(i, k) -
                           sd.eigenvectors(perm[static_cast<std::size_t>(i)], k)) < 1e-8);
        }
    }
}

TEST_CASE("one-factor panel: market mode is uniform") {
    const Eigen::MatrixXd common = testing::gaussian_matrix(1, 100, 8);
    const Eigen::MatrixXd rows = common.replicate(5, 1);
    const auto c = correlation_matrix(normalize(make_return_panel(testing::tickers(5), rows)));
    const auto mode = market_mode(eigendecompose(c));
    CHECK(mode.eigenvalue == doctest::Approx(5.0).epsilon(1e-12));
    REQUIRE(mode.components.size() == 5);
    for (const auto& [ticker, value] : mode.components) {
        CHECK(value == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-10));
    }
    CHECK(mode.components[2].first == "T3");
}

TEST_CASE("sign convention") {
    Eigen::VectorXd v(4);
    v << 0.1, -0.7, 0.5, 0.2;
    apply_sign_convention(v);
    CHECK(v(1) == 0.7);
    // Equal magnitudes: the lowest index decides.
    v << -0.5, 0.5, -0.5, 0.5;
    apply_sign_convention(v);
    CHECK(v(0) == 0.5);
}

TEST_CASE("decomposition is deterministic") {
    const auto c = random_correlation(25, 60, 1);
    const auto a = eigendecompose(c);
    const auto b = eigendecompose(c);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.eigenvectors == b.eigenvectors);
}

TEST_CASE("solver errors") {
    const auto c = random_correlation(6, 30, 2);
    CHECK_THROWS_WITH_AS(eigendecompose(c, {1e-12, 0}), doctest::Contains("residual off-diagonal norm"),
                         Error);
    const auto raw = jacobi_eigen(c.values);
    CHECK(raw.sweeps > 0);
    CHECK(raw.off_diagonal_norm < 6e-12);

    Eigen::MatrixXd asymmetric = Eigen::MatrixXd::Identity(2, 2);
    asymmetric(0, 1) = 0.3;
    CHECK_THROWS_WITH_AS(eigendecompose(wrap(asymmetric)), doctest::Contains("not symmetric"), Error);
    CHECK_THROWS_AS(jacobi_eigen(Eigen::MatrixXd::Zero(2, 3)), Error);
}
