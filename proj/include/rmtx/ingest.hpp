#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rmtx {

using Date = std::chrono::year_month_day;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD).
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

/// Raw date x ticker closing prices. Missing cells are std::nullopt.
class PricePanel {
public:
    /// Validates invariants: dates strictly increasing, tickers unique and
    /// non-empty, every present price finite and > 0, table is dates x tickers.
    PricePanel(std::vector<Date> dates, std::vector<std::string> tickers,
               std::vector<std::vector<std::optional<double>>> rows);

    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<std::string>& tickers() const noexcept { return tickers_; }
    std::size_t num_dates() const noexcept { return dates_.size(); }
    std::size_t num_tickers() const noexcept { return tickers_.size(); }

    const std::optional<double>& price(std::size_t date_index, std::size_t ticker_index) const {
        return rows_[date_index][ticker_index];
    }
    const std::vector<std::optional<double>>& row(std::size_t date_index) const {
        return rows_[date_index];
    }

    bool operator==(const PricePanel&) const = default;

private:
    std::vector<Date> dates_;
    std::vector<std::string> tickers_;
    std::vector<std::vector<std::optional<double>>> rows_;
};

struct FilledCell {
    Date date;
    std::string ticker;

    bool operator==(const FilledCell&) const = default;
};

/// Dense panel after calendar filtering and forward fill.
struct AlignedPanel {
    std::vector<Date> dates;
    std::vector<std::string> tickers;
    Eigen::MatrixXd prices;  // dates x tickers
    std::vector<FilledCell> fill_log;

    std::size_t num_dates() const noexcept { return dates.size(); }
    std::size_t num_tickers() const noexcept { return tickers.size(); }

    bool operator==(const AlignedPanel& other) const {
        return dates == other.dates && tickers == other.tickers &&
               prices.rows() == other.prices.rows() && prices.cols() == other.prices.cols() &&
               prices == other.prices && fill_log == other.fill_log;
    }
};

struct WindowSpec {
    std::string name;
    Date start;
    Date end;

    bool contains(Date date) const noexcept { return start <= date && date <= end; }
    bool operator==(const WindowSpec&) const = default;
};

inline constexpr double kDefaultRemovalThreshold = 0.30;

/// Reads the wide price table: header `date,<ticker>...`, one row per date.
/// Empty cells and `NA` are missing; unparseable or non-positive prices
/// also become missing. The delimiter (comma, tab or semicolon) is taken
/// from the header line.
PricePanel read_prices(std::istream& in, const std::string& source_name = "<stream>");
PricePanel load_prices(const std::filesystem::path& path);

/// Writes a panel in the same wide format; prices use round-trip precision.
void write_prices(std::ostream& out, const AlignedPanel& panel);

/// Drops every date on which at least `threshold` of the markets are missing
/// (a date with no missing markets is always kept), forward-fills the
/// remaining gaps with each ticker's last present close from the raw panel,
/// and drops leading dates on which some ticker has no prior close yet.
AlignedPanel align(const PricePanel& panel, double threshold = kDefaultRemovalThreshold);

/// View of an aligned panel as a raw panel with no missing cells.
PricePanel to_price_panel(const AlignedPanel& panel);

/// Sub-panel with window.start <= date <= window.end.
AlignedPanel slice_window(const AlignedPanel& panel, const WindowSpec& window);

/// Validates a window list: non-empty, unique names, start <= end.
void validate_windows(const std::vector<WindowSpec>& windows);

/// Name of the first window containing `date`, if any.
std::optional<std::string> window_containing(const std::vector<WindowSpec>& windows, Date date);

/// Before / during / after the 2008 crisis, as used by the `crisis-2008` config.
std::vector<WindowSpec> crisis_2008_windows();

}  // namespace rmtx
