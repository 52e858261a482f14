#include "rmtx/spectral.hpp"

#include "rmtx/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rmtx {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j) {
                sum += a(i, j) * a(i, j);
            }
        }
    }
    return std::sqrt(sum);
}

// Annihilates a(p, q) with a plane rotation, keeping `a` exactly symmetric.
void rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, Eigen::Index p, Eigen::Index q) {
    const double apq = a(p, q);
    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    double t = 0.0;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k == p || k == q) {
            continue;
        }
        const double akp = a(k, p);
        const double akq = a(k, q);
        const double new_kp = c * akp - s * akq;
        const double new_kq = s * akp + c * akq;
        a(k, p) = new_kp;
        a(p, k) = new_kp;
        a(k, q) = new_kq;
        a(q, k) = new_kq;
    }
    a(p, p) -= t * apq;
    a(q, q) += t * apq;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (Eigen::Index k = 0; k < n; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

}  // namespace

JacobiResult jacobi_eigen(const Eigen::MatrixXd& symmetric, const JacobiOptions& options) {
    const Eigen::Index n = symmetric.rows();
    if (symmetric.cols() != n) {
        throw Error("spectral", "matrix is not square");
    }
    if (!symmetric.allFinite()) {
        throw Error("spectral", "matrix has non-finite entries");
    }

    Eigen::MatrixXd a = symmetric;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double scale = std::max(1.0, n > 0 ? a.diagonal().cwiseAbs().maxCoeff() : 0.0);
    const double threshold = options.tolerance * static_cast<double>(n) * scale;

    JacobiResult result;
    result.off_diagonal_norm = off_diagonal_norm(a);
    while (result.off_diagonal_norm >= threshold) {
        if (result.sweeps >= options.max_sweeps) {
            std::ostringstream msg;
            msg << "Jacobi iteration did not converge in " << options.max_sweeps
                << " sweeps; residual off-diagonal norm " << result.off_diagonal_norm;
            throw Error("spectral", msg.str());
        }
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) != 0.0) {
                    rotate(a, v, p, q);
                }
            }
        }
        ++result.sweeps;
        result.off_diagonal_norm = off_diagonal_norm(a);
    }
    result.eigenvalues = a.diagonal();
    result.eigenvectors = std::move(v);
    return result;
}

void apply_sign_convention(Eigen::Ref<Eigen::VectorXd> vector) {
    if (vector.size() == 0) {
        return;
    }
    const double largest = vector.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < vector.size(); ++i) {
        if (std::abs(vector(i)) >= largest - 1e-12) {
            if (vector(i) < 0.0) {
                vector = -vector;
            }
            return;
        }
    }
}

SpectralDecomposition eigendecompose(const CorrelationMatrix& matrix,
                                     const JacobiOptions& options) {
    const Eigen::Index n = matrix.size();
    if (matrix.values.cols() != n || static_cast<Eigen::Index>(matrix.tickers.size()) != n) {
        throw Error("spectral", "correlation matrix shape does not match its tickers");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(matrix.values(i, j) - matrix.values(j, i)) > 1e-10) {
                throw Error("spectral", "matrix is not symmetric");
            }
        }
    }

    const auto raw = jacobi_eigen(matrix.values, options);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return raw.eigenvalues(x) > raw.eigenvalues(y);
    });

    SpectralDecomposition out;
    out.tickers = matrix.tickers;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index source = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = raw.eigenvalues(source);
        out.eigenvectors.col(k) = raw.eigenvectors.col(source);
        apply_sign_convention(out.eigenvectors.col(k));
    }
    return out;
}

MarketMode market_mode(const SpectralDecomposition& decomposition) {
    if (decomposition.size() == 0) {
        throw Error("spectral", "empty decomposition has no market mode");
    }
    MarketMode mode{decomposition.eigenvalues(0), {}};
    mode.components.reserve(decomposition.tickers.size());
    for (std::size_t i = 0; i < decomposition.tickers.size(); ++i) {
        mode.components.emplace_back(decomposition.tickers[i],
                                     decomposition.eigenvectors(static_cast<Eigen::Index>(i), 0));
    }
    return mode;
}

}  // namespace rmtx
