#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmtx/analysis.hpp"

namespace rmtx {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportFormat = "rmtx-window-report/1";

/// Full report as one JSON document; doubles keep round-trip precision.
/// Eigenvectors are keyed by rank and then by ticker.
Json report_to_json(const WindowReport& report);

Json spectrum_to_json(const SpectralDecomposition& decomposition);
SpectralDecomposition spectrum_from_json(const Json& json);

/// Reads the `spectrum` section of a report file written by report_to_json.
SpectralDecomposition load_report_spectrum(const std::filesystem::path& path);

/// Run configuration file. Either a bare JSON list of windows
/// [{"name", "start", "end"}, ...] or an object
/// {"name", "theta", "bin_width", "top_k", "windows": [...]} where every
/// key except "windows" is optional.
struct ConfigFile {
    std::string name;
    std::optional<double> theta;
    std::optional<double> bin_width;
    std::optional<std::size_t> top_k;
    std::vector<WindowSpec> windows;
};

ConfigFile parse_config(const Json& json);
ConfigFile load_config(const std::filesystem::path& path);
/// The built-in `crisis-2008` configuration: three crisis windows, theta 0.30.
ConfigFile default_config();
Json config_to_json(const ConfigFile& config);

/// Fixed six-decimal rendering used by every text table.
std::string format_fixed(double value);

// Delimited (comma-separated) tables for plotting, one header line each.
void write_volatility_table(std::ostream& out, const std::vector<VolatilityEntry>& entries);
void write_histogram(std::ostream& out, const std::vector<HistogramBin>& bins,
                     const std::string& value_column);
void write_density_curve(std::ostream& out, const std::vector<DensityPoint>& curve);
void write_eigenvalue_table(std::ostream& out, const SpectralDecomposition& decomposition,
                            const MPModel& model);
void write_eigenvector_table(std::ostream& out, const std::vector<EigenvectorTable>& tables);
void write_ipr_table(std::ostream& out, const std::vector<IPREntry>& entries);
void write_comparison_table(std::ostream& out, const VectorComparison& comparison);
void write_correlation_table(std::ostream& out, const CorrelationMatrix& matrix);

const char* to_string(ComponentStatus status);

}  // namespace rmtx
