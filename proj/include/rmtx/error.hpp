#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rmtx {

/// Error raised by any pipeline stage. `module()` names the stage that
/// failed ("ingest", "returns", ...); `what()` is "<module>: <detail>".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& detail)
        : std::runtime_error(module + ": " + detail), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

}  // namespace rmtx
