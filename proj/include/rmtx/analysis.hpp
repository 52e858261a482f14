#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rmtx/correlation.hpp"
#include "rmtx/ingest.hpp"
#include "rmtx/returns.hpp"
#include "rmtx/rmt.hpp"
#include "rmtx/spectral.hpp"

namespace rmtx {

/// Inverse participation ratio sum_l u_l^4 of one eigenvector. For a unit
/// vector it lies in [1/N, 1]: 1/N when all components are equal, 1 when a
/// single component carries the whole vector.
double inverse_participation_ratio(std::span<const double> vector);

struct IPREntry {
    std::size_t rank;  // 1 = largest eigenvalue
    double eigenvalue;
    double ipr;
    double participation;  // 1 / ipr
};

std::vector<IPREntry> ipr(const SpectralDecomposition& decomposition);

enum class ComponentStatus { same, flipped, indeterminate };

struct ComponentComparison {
    std::string ticker;
    double a;
    double b;  // after orienting the whole vector B towards A
    ComponentStatus status;
};

struct VectorComparison {
    std::size_t rank;
    double floor;
    bool b_reoriented;  // B was multiplied by -1 before the component test
    std::vector<ComponentComparison> components;  // in A's ticker order
    std::size_t flipped_count;
    double flipped_fraction;  // flipped_count / N
};

/// Compares the rank-k eigenvectors (k = 1 is the largest) of two windows
/// ticker by ticker. B is first oriented to have a non-negative dot product
/// with A, so only component-level sign changes count. Components with
/// magnitude below `floor` in either window are indeterminate.
VectorComparison compare_vectors(const SpectralDecomposition& a, const SpectralDecomposition& b,
                                 std::size_t rank, double floor = 0.0);

struct RankedComponent {
    std::string ticker;
    double component;
};

/// Largest-magnitude components of one eigenvector.
struct EigenvectorTable {
    std::size_t rank;
    double eigenvalue;
    std::vector<RankedComponent> components;  // descending |component|
};

std::vector<RankedComponent> top_components(const SpectralDecomposition& decomposition,
                                            std::size_t rank, std::size_t top_k);

struct ReportConfig {
    double bin_width = kDefaultBinWidth;
    std::size_t top_k = 20;
    std::size_t vector_ranks = 2;  // eigenvector tables for ranks 1..vector_ranks
};

struct WindowReport {
    WindowSpec window;
    std::vector<std::string> tickers;
    std::size_t num_dates = 0;         // aligned dates in the window
    std::size_t num_observations = 0;  // T = returns per series
    std::size_t num_filled = 0;        // forward-filled cells in the window
    std::vector<VolatilityEntry> volatilities;
    CoefficientStats coefficients;
    MPModel mp{};
    SpectralDecomposition spectrum;
    SpectrumClassification classification;
    std::vector<EigenvectorTable> eigenvector_tables;
    std::vector<IPREntry> ipr;
    CorrelationMatrix correlation;  // exported as a table, not in JSON

    std::size_t num_series() const noexcept { return tickers.size(); }
};

/// Slices the window and runs returns -> normalize -> correlation ->
/// eigendecompose -> MP bounds -> IPR. Q is T / N of this window. Errors
/// from any stage are rethrown as rmtx::Error("analysis", ...) carrying the
/// window name and the failing stage.
WindowReport build_report(const WindowSpec& window, const AlignedPanel& aligned,
                          const ReportConfig& config = {});

}  // namespace rmtx
