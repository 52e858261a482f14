#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rmtx/ingest.hpp"

namespace rmtx::cli {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirVariable = "RMTX_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "rmtx-out";

/// Effective settings of one `analyze` run after merging
/// flags > config file > defaults.
struct RunConfig {
    std::filesystem::path input;
    std::string config_name;
    std::vector<WindowSpec> windows;
    double theta = kDefaultRemovalThreshold;
    double bin_width = 0.05;
    std::size_t top_k = 20;
    double floor = 0.0;
    std::size_t parallel = 1;
    std::filesystem::path out_dir;
};

/// Validates the invariants of a RunConfig (windows, theta, bin width).
void validate(const RunConfig& config);

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Entry point shared by the binary and the tests. `args` excludes the
/// program name. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::filesystem::path default_out_dir();

}  // namespace rmtx::cli
