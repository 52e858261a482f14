#include "rmtx/rmt.hpp"

#include "rmtx/error.hpp"
#include "rmtx/random.hpp"
#include "rmtx/returns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace rmtx {

MPModel mp_bounds(double q) {
    if (!(q >= 1.0) || !std::isfinite(q)) {
        throw Error("rmt", "Q = " + std::to_string(q) +
                               " is outside the supported range Q >= 1 (for Q < 1 the "
                               "spectrum has a point mass at zero)");
    }
    const double inv_q = 1.0 / q;
    const double spread = 2.0 * std::sqrt(inv_q);
    return {q, std::max(0.0, 1.0 + inv_q - spread), 1.0 + inv_q + spread};
}

double mp_density(const MPModel& model, double lambda) {
    if (!(lambda > model.lambda_minus && lambda < model.lambda_plus) || lambda <= 0.0) {
        return 0.0;
    }
    const double radicand = (model.lambda_plus - lambda) * (lambda - model.lambda_minus);
    return model.q / (2.0 * std::numbers::pi) * std::sqrt(radicand) / lambda;
}

double mp_mass(const MPModel& model, double lo, double hi) {
    lo = std::max(lo, model.lambda_minus);
    hi = std::min(hi, model.lambda_plus);
    if (!(hi > lo)) {
        return 0.0;
    }
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate([&](double x) { return mp_density(model, x); }, lo, hi);
}

std::vector<DensityPoint> mp_density_curve(const MPModel& model, std::size_t points,
                                           double margin) {
    if (points < 2) {
        throw Error("rmt", "density curve needs at least 2 points");
    }
    const double lo = model.lambda_minus - margin;
    const double hi = model.lambda_plus + margin;
    const double step = (hi - lo) / static_cast<double>(points - 1);
    std::vector<DensityPoint> curve(points);
    for (std::size_t k = 0; k < points; ++k) {
        const double x = lo + step * static_cast<double>(k);
        curve[k] = {x, mp_density(model, x)};
    }
    return curve;
}

SpectrumClassification classify_spectrum(std::span<const double> eigenvalues,
                                         const MPModel& model) {
    SpectrumClassification out;
    for (double value : eigenvalues) {
        if (value < model.lambda_minus) {
            out.below.push_back(value);
        } else if (value > model.lambda_plus) {
            out.above.push_back(value);
        } else {
            out.bulk.push_back(value);
        }
    }
    return out;
}

SpectrumClassification classify_spectrum(const SpectralDecomposition& decomposition,
                                         const MPModel& model) {
    return classify_spectrum(
        std::span<const double>(decomposition.eigenvalues.data(),
                                static_cast<std::size_t>(decomposition.eigenvalues.size())),
        model);
}

SpectralDecomposition surrogate_spectrum(std::size_t n, std::size_t length, std::uint64_t seed) {
    if (n < 2 || length < n) {
        throw Error("rmt", "surrogate needs L >= N >= 2, got N = " + std::to_string(n) +
                               ", L = " + std::to_string(length));
    }
    BoxMullerNormal normal(seed);
    Eigen::MatrixXd deviates(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(length));
    for (Eigen::Index i = 0; i < deviates.rows(); ++i) {
        for (Eigen::Index t = 0; t < deviates.cols(); ++t) {
            deviates(i, t) = normal();
        }
    }
    std::vector<std::string> tickers;
    tickers.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        tickers.push_back("S" + std::to_string(i + 1));
    }
    const auto panel = make_return_panel(std::move(tickers), std::move(deviates));
    return eigendecompose(correlation_matrix(normalize(panel)));
}

SurrogateComparison compare_surrogates(std::size_t n, std::size_t length, std::size_t seed_count,
                                       std::uint64_t base_seed, std::size_t bins) {
    if (seed_count == 0) {
        throw Error("rmt", "surrogate comparison needs at least one seed");
    }
    if (bins == 0) {
        throw Error("rmt", "surrogate comparison needs at least one bin");
    }
    SurrogateComparison out;
    out.model = mp_bounds(static_cast<double>(length) / static_cast<double>(n));
    out.eigenvalues.reserve(n * seed_count);
    for (std::size_t s = 0; s < seed_count; ++s) {
        const auto spectrum = surrogate_spectrum(n, length, base_seed + s);
        out.eigenvalues.insert(out.eigenvalues.end(), spectrum.eigenvalues.begin(),
                               spectrum.eigenvalues.end());
    }

    const double lo = out.model.lambda_minus - kDefaultDensityMargin;
    const double hi = out.model.lambda_plus + kDefaultDensityMargin;
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    std::size_t outside = 0;
    std::size_t bulk = 0;
    for (double value : out.eigenvalues) {
        if (value >= out.model.lambda_minus && value <= out.model.lambda_plus) {
            ++bulk;
        }
        const double position = std::floor((value - lo) / width);
        if (position < 0.0 || position >= static_cast<double>(bins)) {
            ++outside;
            continue;
        }
        ++counts[static_cast<std::size_t>(position)];
    }

    const double total = static_cast<double>(out.eigenvalues.size());
    out.bulk_fraction = static_cast<double>(bulk) / total;
    out.l1_distance = static_cast<double>(outside) / total;
    out.empirical.resize(bins);
    out.analytic.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double left = lo + width * static_cast<double>(b);
        const double empirical_mass = static_cast<double>(counts[b]) / total;
        const double analytic_mass = mp_mass(out.model, left, left + width);
        const double center = left + 0.5 * width;
        out.empirical[b] = {center, empirical_mass / width};
        out.analytic[b] = {center, analytic_mass / width};
        out.l1_distance += std::abs(empirical_mass - analytic_mass);
    }
    return out;
}

}  // namespace rmtx
