#include "rmtx/report_io.hpp"

#include "rmtx/error.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace rmtx {

namespace {

Json window_to_json(const WindowSpec& window) {
    return Json{{"name", window.name},
                {"start", format_date(window.start)},
                {"end", format_date(window.end)}};
}

WindowSpec window_from_json(const Json& json) {
    if (!json.is_object() || !json.contains("name") || !json.contains("start") ||
        !json.contains("end")) {
        throw Error("config", "each window needs \"name\", \"start\" and \"end\"");
    }
    const auto name = json.at("name").get<std::string>();
    const auto start = parse_date(json.at("start").get<std::string>());
    const auto end = parse_date(json.at("end").get<std::string>());
    if (!start || !end) {
        throw Error("config", "window '" + name + "' has a date that is not YYYY-MM-DD");
    }
    return {name, *start, *end};
}

Json bins_to_json(const std::vector<HistogramBin>& bins) {
    Json out = Json::array();
    for (const auto& bin : bins) {
        out.push_back(Json::array({bin.center, bin.density}));
    }
    return out;
}

}  // namespace

Json spectrum_to_json(const SpectralDecomposition& decomposition) {
    Json vectors = Json::array();
    for (Eigen::Index k = 0; k < decomposition.size(); ++k) {
        Json components = Json::object();
        for (std::size_t i = 0; i < decomposition.tickers.size(); ++i) {
            components[decomposition.tickers[i]] =
                decomposition.eigenvectors(static_cast<Eigen::Index>(i), k);
        }
        vectors.push_back(Json{{"rank", k + 1},
                               {"eigenvalue", decomposition.eigenvalues(k)},
                               {"components", std::move(components)}});
    }
    return Json{{"convention", decomposition.convention},
                {"tickers", decomposition.tickers},
                {"eigenvalues", std::vector<double>(decomposition.eigenvalues.begin(),
                                                    decomposition.eigenvalues.end())},
                {"eigenvectors", std::move(vectors)}};
}

SpectralDecomposition spectrum_from_json(const Json& json) {
    try {
        SpectralDecomposition out;
        out.tickers = json.at("tickers").get<std::vector<std::string>>();
        out.convention = json.value("convention", std::string(kSpectralConvention));
        const auto values = json.at("eigenvalues").get<std::vector<double>>();
        const auto n = static_cast<Eigen::Index>(out.tickers.size());
        const auto& vectors = json.at("eigenvectors");
        if (static_cast<Eigen::Index>(values.size()) != n ||
            static_cast<Eigen::Index>(vectors.size()) != n) {
            throw Error("report", "spectrum has " + std::to_string(values.size()) +
                                      " eigenvalues and " + std::to_string(vectors.size()) +
                                      " eigenvectors for " + std::to_string(n) + " tickers");
        }
        out.eigenvalues = Eigen::Map<const Eigen::VectorXd>(values.data(), n);
        out.eigenvectors.resize(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto& entry = vectors.at(static_cast<std::size_t>(k));
            if (entry.at("rank").get<Eigen::Index>() != k + 1) {
                throw Error("report", "eigenvectors are not listed in rank order");
            }
            const auto& components = entry.at("components");
            for (Eigen::Index i = 0; i < n; ++i) {
                out.eigenvectors(i, k) =
                    components.at(out.tickers[static_cast<std::size_t>(i)]).get<double>();
            }
        }
        return out;
    } catch (const Json::exception& error) {
        throw Error("report", std::string("malformed spectrum: ") + error.what());
    }
}

Json report_to_json(const WindowReport& report) {
    Json volatility = Json::array();
    for (const auto& entry : report.volatilities) {
        volatility.push_back(Json{{"ticker", entry.ticker}, {"sigma", entry.sigma}});
    }
    Json tables = Json::array();
    for (const auto& table : report.eigenvector_tables) {
        Json components = Json::array();
        for (const auto& c : table.components) {
            components.push_back(Json{{"ticker", c.ticker}, {"component", c.component}});
        }
        tables.push_back(Json{{"rank", table.rank},
                              {"eigenvalue", table.eigenvalue},
                              {"components", std::move(components)}});
    }
    Json ipr_entries = Json::array();
    for (const auto& entry : report.ipr) {
        ipr_entries.push_back(Json{{"rank", entry.rank},
                                   {"eigenvalue", entry.eigenvalue},
                                   {"ipr", entry.ipr},
                                   {"participation", entry.participation}});
    }
    return Json{
        {"format", kReportFormat},
        {"window", window_to_json(report.window)},
        {"n", report.num_series()},
        {"t", report.num_observations},
        {"dates", report.num_dates},
        {"filled_cells", report.num_filled},
        {"tickers", report.tickers},
        {"volatility", std::move(volatility)},
        {"coefficients",
         Json{{"count", report.coefficients.count},
              {"mean", report.coefficients.mean},
              {"std", report.coefficients.std_dev},
              {"bin_width", report.coefficients.bin_width},
              {"histogram", bins_to_json(report.coefficients.histogram)}}},
        {"mp",
         Json{{"q", report.mp.q},
              {"lambda_minus", report.mp.lambda_minus},
              {"lambda_plus", report.mp.lambda_plus}}},
        {"classification",
         Json{{"below", report.classification.below},
              {"bulk_count", report.classification.bulk.size()},
              {"above", report.classification.above}}},
        {"top_eigenvectors", std::move(tables)},
        {"ipr", std::move(ipr_entries)},
        {"spectrum", spectrum_to_json(report.spectrum)},
    };
}

SpectralDecomposition load_report_spectrum(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("report", "cannot open report '" + path.string() + "'");
    }
    Json json;
    try {
        in >> json;
    } catch (const Json::exception& error) {
        throw Error("report", "'" + path.string() + "' is not valid JSON: " + error.what());
    }
    if (!json.is_object() || !json.contains("spectrum")) {
        throw Error("report", "'" + path.string() + "' has no spectrum section");
    }
    return spectrum_from_json(json.at("spectrum"));
}

ConfigFile parse_config(const Json& json) {
    try {
        ConfigFile config;
        const Json* windows = &json;
        if (json.is_object()) {
            config.name = json.value("name", std::string{});
            if (json.contains("theta")) {
                config.theta = json.at("theta").get<double>();
            }
            if (json.contains("bin_width")) {
                config.bin_width = json.at("bin_width").get<double>();
            }
            if (json.contains("top_k")) {
                config.top_k = json.at("top_k").get<std::size_t>();
            }
            if (!json.contains("windows")) {
                throw Error("config", "configuration object has no \"windows\" list");
            }
            windows = &json.at("windows");
        }
        if (!windows->is_array()) {
            throw Error("config", "windows must be a JSON list of {name, start, end}");
        }
        for (const auto& entry : *windows) {
            config.windows.push_back(window_from_json(entry));
        }
        try {
            validate_windows(config.windows);
        } catch (const Error& error) {
            throw Error("config", error.what());
        }
        return config;
    } catch (const Json::exception& error) {
        throw Error("config", std::string("malformed configuration: ") + error.what());
    }
}

ConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("config", "cannot open configuration '" + path.string() + "'");
    }
    Json json;
    try {
        in >> json;
    } catch (const Json::exception& error) {
        throw Error("config", "'" + path.string() + "' is not valid JSON: " + error.what());
    }
    return parse_config(json);
}

ConfigFile default_config() {
    return {"crisis-2008", kDefaultRemovalThreshold, kDefaultBinWidth, std::size_t{20},
            crisis_2008_windows()};
}

Json config_to_json(const ConfigFile& config) {
    Json out = Json::object();
    if (!config.name.empty()) {
        out["name"] = config.name;
    }
    if (config.theta) {
        out["theta"] = *config.theta;
    }
    if (config.bin_width) {
        out["bin_width"] = *config.bin_width;
    }
    if (config.top_k) {
        out["top_k"] = *config.top_k;
    }
    out["windows"] = Json::array();
    for (const auto& window : config.windows) {
        out["windows"].push_back(window_to_json(window));
    }
    return out;
}

std::string format_fixed(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", value);
    return buffer;
}

void write_volatility_table(std::ostream& out, const std::vector<VolatilityEntry>& entries) {
    out << "ticker,sigma\n";
    for (const auto& entry : entries) {
        out << entry.ticker << ',' << format_fixed(entry.sigma) << '\n';
    }
}

void write_histogram(std::ostream& out, const std::vector<HistogramBin>& bins,
                     const std::string& value_column) {
    out << value_column << ",density\n";
    for (const auto& bin : bins) {
        out << format_fixed(bin.center) << ',' << format_fixed(bin.density) << '\n';
    }
}

void write_density_curve(std::ostream& out, const std::vector<DensityPoint>& curve) {
    out << "lambda,density\n";
    for (const auto& point : curve) {
        out << format_fixed(point.lambda) << ',' << format_fixed(point.density) << '\n';
    }
}

void write_eigenvalue_table(std::ostream& out, const SpectralDecomposition& decomposition,
                            const MPModel& model) {
    out << "rank,eigenvalue,class\n";
    for (Eigen::Index k = 0; k < decomposition.size(); ++k) {
        const double value = decomposition.eigenvalues(k);
        const char* label = value < model.lambda_minus  ? "below"
                            : value > model.lambda_plus ? "above"
                                                        : "bulk";
        out << k + 1 << ',' << format_fixed(value) << ',' << label << '\n';
    }
}

void write_eigenvector_table(std::ostream& out, const std::vector<EigenvectorTable>& tables) {
    out << "rank,eigenvalue,position,ticker,component\n";
    for (const auto& table : tables) {
        for (std::size_t i = 0; i < table.components.size(); ++i) {
            out << table.rank << ',' << format_fixed(table.eigenvalue) << ',' << i + 1 << ','
                << table.components[i].ticker << ',' << format_fixed(table.components[i].component)
                << '\n';
        }
    }
}

void write_ipr_table(std::ostream& out, const std::vector<IPREntry>& entries) {
    out << "rank,eigenvalue,ipr,participation\n";
    for (const auto& entry : entries) {
        out << entry.rank << ',' << format_fixed(entry.eigenvalue) << ','
            << format_fixed(entry.ipr) << ',' << format_fixed(entry.participation) << '\n';
    }
}

const char* to_string(ComponentStatus status) {
    switch (status) {
        case ComponentStatus::same:
            return "same";
        case ComponentStatus::flipped:
            return "flipped";
        case ComponentStatus::indeterminate:
            return "indeterminate";
    }
    return "unknown";
}

void write_comparison_table(std::ostream& out, const VectorComparison& comparison) {
    out << "ticker,component_a,component_b,status\n";
    for (const auto& c : comparison.components) {
        out << c.ticker << ',' << format_fixed(c.a) << ',' << format_fixed(c.b) << ','
            << to_string(c.status) << '\n';
    }
}

void write_correlation_table(std::ostream& out, const CorrelationMatrix& matrix) {
    out << "ticker";
    for (const auto& ticker : matrix.tickers) {
        out << ',' << ticker;
    }
    out << '\n';
    for (Eigen::Index i = 0; i < matrix.size(); ++i) {
        out << matrix.tickers[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < matrix.size(); ++j) {
            out << ',' << format_fixed(matrix.values(i, j));
        }
        out << '\n';
    }
}

}  // namespace rmtx
