#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rmtx/correlation.hpp"
#include "rmtx/spectral.hpp"

namespace rmtx {

/// Marchenko-Pastur null model for N series of L observations, Q = L / N.
struct MPModel {
    double q;
    double lambda_minus;
    double lambda_plus;
};

/// lambda_(+/-) = 1 + 1/Q +/- 2 sqrt(1/Q). Requires Q >= 1; below that the
/// limiting density carries a point mass at zero, which is not modelled.
MPModel mp_bounds(double q);

/// (Q / 2 pi) sqrt((lambda_+ - x)(x - lambda_-)) / x on the support, 0 elsewhere.
double mp_density(const MPModel& model, double lambda);

/// Integral of mp_density over [lo, hi] by tanh-sinh quadrature.
double mp_mass(const MPModel& model, double lo, double hi);

struct DensityPoint {
    double lambda;
    double density;
};

inline constexpr std::size_t kDefaultDensityPoints = 512;
inline constexpr double kDefaultDensityMargin = 0.1;

/// Evenly spaced samples over [lambda_- - margin, lambda_+ + margin].
std::vector<DensityPoint> mp_density_curve(const MPModel& model,
                                           std::size_t points = kDefaultDensityPoints,
                                           double margin = kDefaultDensityMargin);

/// Eigenvalues split by the null-model support. Values exactly on a bound
/// count as bulk.
struct SpectrumClassification {
    std::vector<double> below;
    std::vector<double> bulk;
    std::vector<double> above;
};

SpectrumClassification classify_spectrum(std::span<const double> eigenvalues,
                                         const MPModel& model);
SpectrumClassification classify_spectrum(const SpectralDecomposition& decomposition,
                                         const MPModel& model);

/// Correlation spectrum of N independent standard-normal series of length L.
/// Deviates come from BoxMullerNormal(seed), filled series by series.
SpectralDecomposition surrogate_spectrum(std::size_t n, std::size_t length, std::uint64_t seed);

/// Pooled eigenvalues of `seed_count` surrogates (seeds base_seed,
/// base_seed + 1, ...) against the analytic law on a common bin grid.
struct SurrogateComparison {
    MPModel model;
    std::vector<double> eigenvalues;        // all realizations, seed-major
    std::vector<HistogramBin> empirical;    // averaged eigenvalue density
    std::vector<HistogramBin> analytic;     // bin-averaged mp_density
    double l1_distance = 0.0;               // sum |mass_emp - mass_mp| incl. out-of-grid mass
    double bulk_fraction = 0.0;
};

inline constexpr std::size_t kDefaultSurrogateBins = 40;

SurrogateComparison compare_surrogates(std::size_t n, std::size_t length, std::size_t seed_count,
                                       std::uint64_t base_seed,
                                       std::size_t bins = kDefaultSurrogateBins);

}  // namespace rmtx
