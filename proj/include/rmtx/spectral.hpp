#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rmtx/correlation.hpp"

namespace rmtx {

/// Ordering and sign convention applied by eigendecompose():
///  - eigenvalues sorted descending; exact ties keep the solver's order
///  - each eigenvector's largest-magnitude component is positive, with
///    near-ties (within 1e-12) resolved to the lowest index
inline constexpr std::string_view kSpectralConvention =
    "descending-stable/max-abs-component-positive";

struct SpectralDecomposition {
    std::vector<std::string> tickers;
    Eigen::VectorXd eigenvalues;   // descending
    Eigen::MatrixXd eigenvectors;  // column k pairs with eigenvalues(k)
    std::string convention{kSpectralConvention};

    Eigen::Index size() const noexcept { return eigenvalues.size(); }
};

struct JacobiOptions {
    /// Converged when the off-diagonal Frobenius norm < tolerance * N.
    double tolerance = 1e-12;
    int max_sweeps = 100;
};

/// Raw output of the cyclic Jacobi solver, in the solver's own order.
struct JacobiResult {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    int sweeps = 0;
    double off_diagonal_norm = 0.0;
};

/// Cyclic Jacobi rotations on a symmetric matrix. Throws rmtx::Error
/// reporting the residual off-diagonal norm if the sweep budget runs out.
JacobiResult jacobi_eigen(const Eigen::MatrixXd& symmetric, const JacobiOptions& options = {});

/// Full eigendecomposition with the ordering and sign convention above.
SpectralDecomposition eigendecompose(const CorrelationMatrix& matrix,
                                     const JacobiOptions& options = {});

/// Flips `vector` so that its largest-magnitude component is positive.
void apply_sign_convention(Eigen::Ref<Eigen::VectorXd> vector);

struct MarketMode {
    double eigenvalue;
    std::vector<std::pair<std::string, double>> components;  // ticker order
};

MarketMode market_mode(const SpectralDecomposition& decomposition);

}  // namespace rmtx
