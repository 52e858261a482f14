#include "rmtx/ingest.hpp"

#include "rmtx/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace rmtx {

namespace {

[[noreturn]] void fail(const std::string& detail) { throw Error("ingest", detail); }

std::string_view trim(std::string_view value) {
    const auto first = value.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = value.find_last_not_of(" \t\r\n");
    return value.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t begin = 0;
    while (true) {
        const auto pos = line.find(delimiter, begin);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(begin)));
            return fields;
        }
        fields.push_back(trim(line.substr(begin, pos - begin)));
        begin = pos + 1;
    }
}

char detect_delimiter(std::string_view header) {
    for (char candidate : {',', '\t', ';'}) {
        if (header.find(candidate) != std::string_view::npos) {
            return candidate;
        }
    }
    return ',';
}

std::optional<double> parse_price(std::string_view field) {
    if (field.empty() || field == "NA") {
        return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        return std::nullopt;
    }
    if (!std::isfinite(value) || value <= 0.0) {
        return std::nullopt;
    }
    return value;
}

bool parse_int(std::string_view text, int& out) {
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    text = trim(text);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    int y = 0;
    int m = 0;
    int d = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
        !parse_int(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        return std::nullopt;
    }
    return date;
}

std::string format_date(Date date) {
    std::ostringstream out;
    out << std::setfill('0') << std::setw(4) << static_cast<int>(date.year()) << '-'
        << std::setw(2) << static_cast<unsigned>(date.month()) << '-' << std::setw(2)
        << static_cast<unsigned>(date.day());
    return out.str();
}

PricePanel::PricePanel(std::vector<Date> dates, std::vector<std::string> tickers,
                       std::vector<std::vector<std::optional<double>>> rows)
    : dates_(std::move(dates)), tickers_(std::move(tickers)), rows_(std::move(rows)) {
    if (rows_.size() != dates_.size()) {
        fail("price table has " + std::to_string(rows_.size()) + " rows for " +
             std::to_string(dates_.size()) + " dates");
    }
    std::unordered_set<std::string> seen;
    for (const auto& ticker : tickers_) {
        if (ticker.empty()) {
            fail("empty ticker name");
        }
        if (!seen.insert(ticker).second) {
            fail("duplicate ticker '" + ticker + "'");
        }
    }
    for (std::size_t t = 0; t < dates_.size(); ++t) {
        if (t > 0 && !(dates_[t - 1] < dates_[t])) {
            fail("dates not strictly increasing at " + format_date(dates_[t]));
        }
        if (rows_[t].size() != tickers_.size()) {
            fail("row for " + format_date(dates_[t]) + " has " + std::to_string(rows_[t].size()) +
                 " prices for " + std::to_string(tickers_.size()) + " tickers");
        }
        for (const auto& cell : rows_[t]) {
            if (cell && !(std::isfinite(*cell) && *cell > 0.0)) {
                fail("non-positive price on " + format_date(dates_[t]));
            }
        }
    }
}

PricePanel read_prices(std::istream& in, const std::string& source_name) {
    const auto where = [&](std::size_t line) {
        return source_name + " line " + std::to_string(line);
    };

    std::string line;
    std::size_t line_number = 0;
    bool have_header = false;
    while (!have_header && std::getline(in, line)) {
        ++line_number;
        have_header = !trim(line).empty();
    }
    if (!have_header) {
        fail(source_name + ": empty file, expected a header line");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }

    const char delimiter = detect_delimiter(line);
    const auto header = split(line, delimiter);
    if (header.size() < 2 || header.front() != "date") {
        fail(where(line_number) + ": malformed header, expected 'date' followed by tickers");
    }
    std::vector<std::string> tickers;
    std::set<std::string, std::less<>> seen_tickers;
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i].empty()) {
            fail(where(line_number) + ": malformed header, empty ticker in column " +
                 std::to_string(i + 1));
        }
        if (!seen_tickers.emplace(header[i]).second) {
            fail(where(line_number) + ": malformed header, duplicate ticker '" +
                 std::string(header[i]) + "'");
        }
        tickers.emplace_back(header[i]);
    }

    struct Row {
        Date date;
        std::vector<std::optional<double>> prices;
    };
    std::vector<Row> rows;
    std::set<Date> seen_dates;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(line, delimiter);
        if (fields.size() != header.size()) {
            fail(where(line_number) + ": expected " + std::to_string(header.size()) +
                 " fields, found " + std::to_string(fields.size()));
        }
        const auto date = parse_date(fields.front());
        if (!date) {
            fail(where(line_number) + ": unparseable date '" + std::string(fields.front()) + "'");
        }
        if (!seen_dates.insert(*date).second) {
            fail(where(line_number) + ": duplicate date " + format_date(*date));
        }
        Row row{*date, {}};
        row.prices.reserve(tickers.size());
        for (std::size_t i = 1; i < fields.size(); ++i) {
            row.prices.push_back(parse_price(fields[i]));
        }
        rows.push_back(std::move(row));
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    std::vector<Date> dates;
    std::vector<std::vector<std::optional<double>>> table;
    dates.reserve(rows.size());
    table.reserve(rows.size());
    for (auto& row : rows) {
        dates.push_back(row.date);
        table.push_back(std::move(row.prices));
    }
    return PricePanel(std::move(dates), std::move(tickers), std::move(table));
}

PricePanel load_prices(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail("cannot open price file '" + path.string() + "'");
    }
    return read_prices(in, path.string());
}

void write_prices(std::ostream& out, const AlignedPanel& panel) {
    out << "date";
    for (const auto& ticker : panel.tickers) {
        out << ',' << ticker;
    }
    out << '\n';
    const auto old_precision = out.precision(17);
    for (std::size_t t = 0; t < panel.num_dates(); ++t) {
        out << format_date(panel.dates[t]);
        for (Eigen::Index i = 0; i < panel.prices.cols(); ++i) {
            out << ',' << panel.prices(static_cast<Eigen::Index>(t), i);
        }
        out << '\n';
    }
    out.precision(old_precision);
}

AlignedPanel align(const PricePanel& panel, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        fail("removal threshold must lie in [0, 1], got " + std::to_string(threshold));
    }
    const std::size_t n = panel.num_tickers();
    const std::size_t raw_dates = panel.num_dates();
    if (n == 0 || raw_dates == 0) {
        fail("cannot align an empty price panel");
    }
    for (std::size_t i = 0; i < n; ++i) {
        bool any = false;
        for (std::size_t t = 0; t < raw_dates && !any; ++t) {
            any = panel.price(t, i).has_value();
        }
        if (!any) {
            fail("ticker '" + panel.tickers()[i] + "' has no price on any date");
        }
    }

    // Walk the raw panel once, tracking the last present close per ticker
    // (including closes on dates that are themselves removed).
    std::vector<std::optional<double>> last_close(n);
    std::vector<std::size_t> kept;
    std::vector<std::vector<double>> kept_rows;
    std::vector<std::vector<bool>> kept_filled;
    for (std::size_t t = 0; t < raw_dates; ++t) {
        std::size_t missing = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!panel.price(t, i)) {
                ++missing;
            }
        }
        const double missing_fraction = static_cast<double>(missing) / static_cast<double>(n);
        const bool removed = missing > 0 && missing_fraction >= threshold;

        if (!removed) {
            std::vector<double> prices(n);
            std::vector<bool> filled(n, false);
            bool complete = true;
            for (std::size_t i = 0; i < n; ++i) {
                if (const auto& cell = panel.price(t, i)) {
                    prices[i] = *cell;
                } else if (last_close[i]) {
                    prices[i] = *last_close[i];
                    filled[i] = true;
                } else {
                    complete = false;
                }
            }
            // Leading dates where some ticker has no close yet are dropped
            // for the whole panel; back-filling would use future prices.
            if (complete) {
                kept.push_back(t);
                kept_rows.push_back(std::move(prices));
                kept_filled.push_back(std::move(filled));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (const auto& cell = panel.price(t, i)) {
                last_close[i] = cell;
            }
        }
    }
    if (kept.empty()) {
        fail("no dates survive alignment with removal threshold " + std::to_string(threshold));
    }

    AlignedPanel out;
    out.tickers = panel.tickers();
    out.prices.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(n));
    out.dates.reserve(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const Date date = panel.dates()[kept[k]];
        out.dates.push_back(date);
        for (std::size_t i = 0; i < n; ++i) {
            out.prices(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = kept_rows[k][i];
            if (kept_filled[k][i]) {
                out.fill_log.push_back({date, panel.tickers()[i]});
            }
        }
    }
    return out;
}

PricePanel to_price_panel(const AlignedPanel& panel) {
    std::vector<std::vector<std::optional<double>>> rows(panel.num_dates());
    for (std::size_t t = 0; t < panel.num_dates(); ++t) {
        rows[t].reserve(panel.num_tickers());
        for (std::size_t i = 0; i < panel.num_tickers(); ++i) {
            rows[t].emplace_back(
                panel.prices(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)));
        }
    }
    return PricePanel(panel.dates, panel.tickers, std::move(rows));
}

AlignedPanel slice_window(const AlignedPanel& panel, const WindowSpec& window) {
    const auto first = std::lower_bound(panel.dates.begin(), panel.dates.end(), window.start);
    const auto last = std::upper_bound(first, panel.dates.end(), window.end);
    if (first == last) {
        fail("window '" + window.name + "' [" + format_date(window.start) + ", " +
             format_date(window.end) + "] does not intersect the panel dates");
    }
    const auto begin_row = static_cast<Eigen::Index>(first - panel.dates.begin());
    const auto row_count = static_cast<Eigen::Index>(last - first);

    AlignedPanel out;
    out.dates.assign(first, last);
    out.tickers = panel.tickers;
    out.prices = panel.prices.middleRows(begin_row, row_count);
    for (const auto& cell : panel.fill_log) {
        if (window.contains(cell.date)) {
            out.fill_log.push_back(cell);
        }
    }
    return out;
}

void validate_windows(const std::vector<WindowSpec>& windows) {
    if (windows.empty()) {
        fail("window configuration is empty");
    }
    std::unordered_set<std::string> names;
    for (const auto& window : windows) {
        if (window.name.empty()) {
            fail("window with an empty name");
        }
        if (!names.insert(window.name).second) {
            fail("duplicate window name '" + window.name + "'");
        }
        if (window.end < window.start) {
            fail("window '" + window.name + "' ends before it starts");
        }
    }
}

std::optional<std::string> window_containing(const std::vector<WindowSpec>& windows, Date date) {
    for (const auto& window : windows) {
        if (window.contains(date)) {
            return window.name;
        }
    }
    return std::nullopt;
}

std::vector<WindowSpec> crisis_2008_windows() {
    using namespace std::chrono;
    return {
        {"before", 2006y / June / 2d, 2007y / November / 30d},
        {"during", 2007y / December / 3d, 2009y / June / 30d},
        {"after", 2010y / January / 1d, 2011y / June / 30d},
    };
}

}  // namespace rmtx
