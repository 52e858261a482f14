// Generates the bundled synthetic price panel (data/synthetic_panel.csv).
//
// Twenty series driven by a common market factor plus a second factor
// whose loadings change sign for a fixed subset of tickers during the
// crisis window, with doubled volatility during the crisis. Market
// holidays are simulated: minor ones close one or two markets (the date is
// kept and forward-filled), major ones close 7-9 markets (the date is
// removed at theta = 0.30). The first ticker starts trading one day late.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rmtx/ingest.hpp"
#include "rmtx/random.hpp"

namespace {

using namespace std::chrono;

enum class Regime { before, during, gap, after };

Regime regime_of(rmtx::Date date) {
    if (date <= 2007y / November / 30d) {
        return Regime::before;
    }
    if (date <= 2009y / June / 30d) {
        return Regime::during;
    }
    if (date < 2010y / January / 1d) {
        return Regime::gap;
    }
    return Regime::after;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> tickers{
        "MERV", "BVSP", "CCSI", "BSESN", "JKSE", "KLSE", "MXX",  "KS11", "TWII", "AORD",
        "ATX",  "FCHI", "GDAXI", "HSI", "TA100", "N225", "STI", "SSMI", "FTSE", "GSPC"};
    const std::size_t n = tickers.size();

    rmtx::SplitMix64 uniform(20080915);
    rmtx::BoxMullerNormal normal(7151);

    std::vector<double> beta(n);
    std::vector<double> gamma(n);
    for (std::size_t i = 0; i < n; ++i) {
        beta[i] = 0.6 + 0.4 * uniform.uniform();
        gamma[i] = (i % 2 == 0 ? 0.7 : -0.7);
    }
    // Tickers whose second-factor loading reverses during the crisis.
    const std::vector<std::size_t> reversing{0, 1, 3, 6, 11, 14, 17};

    std::vector<double> price(n);
    for (std::size_t i = 0; i < n; ++i) {
        price[i] = 1000.0 * static_cast<double>(i + 1);
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (argc > 1) {
        file.open(argv[1]);
        out = &file;
    }
    *out << "date";
    for (const auto& t : tickers) {
        *out << ',' << t;
    }
    *out << '\n';

    const sys_days first = 2006y / June / 2d;
    const sys_days last = 2011y / July / 29d;
    bool first_row = true;
    for (sys_days day = first; day <= last; day += days{1}) {
        const weekday wd{day};
        if (wd == Saturday || wd == Sunday) {
            continue;
        }
        const rmtx::Date date{day};
        const Regime regime = regime_of(date);
        const double scale = regime == Regime::during ? 0.02 : 0.01;
        const double market = normal();
        const double second = normal();
        for (std::size_t i = 0; i < n; ++i) {
            double loading = gamma[i];
            if (regime == Regime::during &&
                std::find(reversing.begin(), reversing.end(), i) != reversing.end()) {
                loading = -loading;
            }
            const double r = scale * (beta[i] * market + loading * second + 0.8 * normal());
            price[i] *= std::exp(r);
        }

        std::vector<bool> closed(n, false);
        const double roll = uniform.uniform();
        if (roll < 0.01) {
            const std::size_t count = 7 + static_cast<std::size_t>(uniform.uniform() * 3.0);
            for (std::size_t c = 0; c < count; ++c) {
                closed[(static_cast<std::size_t>(uniform.uniform() * n) + c * 3) % n] = true;
            }
        } else if (roll < 0.05) {
            const std::size_t count = 1 + static_cast<std::size_t>(uniform.uniform() * 2.0);
            for (std::size_t c = 0; c < count; ++c) {
                closed[static_cast<std::size_t>(uniform.uniform() * n)] = true;
            }
        }
        if (first_row) {
            closed[0] = true;
            first_row = false;
        }

        *out << rmtx::format_date(date);
        for (std::size_t i = 0; i < n; ++i) {
            *out << ',';
            if (!closed[i]) {
                char buffer[32];
                std::snprintf(buffer, sizeof buffer, "%.4f", price[i]);
                *out << buffer;
            } else if (i % 2 == 0) {
                *out << "NA";
            }
        }
        *out << '\n';
    }
    return 0;
}
