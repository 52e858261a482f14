#include "rmtx/cli.hpp"

#include "rmtx/analysis.hpp"
#include "rmtx/error.hpp"
#include "rmtx/report_io.hpp"
#include "rmtx/rmt.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

namespace rmtx::cli {

namespace fs = std::filesystem;

namespace {

std::string file_safe(const std::string& name) {
    std::string out = name;
    for (char& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
        if (!ok) {
            c = '_';
        }
    }
    return out;
}

template <typename Writer>
void write_table(const fs::path& path, Writer&& writer) {
    std::ostringstream buffer;
    writer(buffer);
    write_file_atomic(path, buffer.str());
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error("cli", "cannot create output directory '" + dir.string() + "': " +
                               ec.message());
    }
}

std::string sci(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3e", value);
    return buffer;
}

void write_window_outputs(const fs::path& out_dir, const WindowReport& report) {
    const auto stem = file_safe(report.window.name);
    write_file_atomic(out_dir / ("report_" + stem + ".json"), report_to_json(report).dump(2) + "\n");

    const auto dir = out_dir / stem;
    ensure_directory(dir);
    write_table(dir / "volatility.csv",
                [&](std::ostream& o) { write_volatility_table(o, report.volatilities); });
    write_table(dir / "coefficient_histogram.csv", [&](std::ostream& o) {
        write_histogram(o, report.coefficients.histogram, "coefficient");
    });
    write_table(dir / "correlation.csv",
                [&](std::ostream& o) { write_correlation_table(o, report.correlation); });
    write_table(dir / "eigenvalues.csv",
                [&](std::ostream& o) { write_eigenvalue_table(o, report.spectrum, report.mp); });
    write_table(dir / "mp_density.csv",
                [&](std::ostream& o) { write_density_curve(o, mp_density_curve(report.mp)); });
    write_table(dir / "eigenvectors.csv",
                [&](std::ostream& o) { write_eigenvector_table(o, report.eigenvector_tables); });
    write_table(dir / "ipr.csv", [&](std::ostream& o) { write_ipr_table(o, report.ipr); });
}

std::string summary_line(const WindowReport& r) {
    std::ostringstream line;
    line << std::left << std::setw(12) << r.window.name << std::right << std::setw(6)
         << r.num_series() << std::setw(7) << r.num_observations << std::setw(12)
         << format_fixed(r.mp.q) << std::setw(13) << format_fixed(r.mp.lambda_minus)
         << std::setw(13) << format_fixed(r.mp.lambda_plus) << std::setw(12)
         << format_fixed(r.spectrum.eigenvalues(0)) << std::setw(12)
         << format_fixed(r.coefficients.mean) << std::setw(7) << r.classification.below.size()
         << std::setw(7) << r.classification.above.size();
    return line.str();
}

std::string summary_header() {
    std::ostringstream line;
    line << std::left << std::setw(12) << "window" << std::right << std::setw(6) << "N"
         << std::setw(7) << "T" << std::setw(12) << "Q" << std::setw(13) << "lambda_minus"
         << std::setw(13) << "lambda_plus" << std::setw(12) << "lambda_1" << std::setw(12)
         << "mean_C" << std::setw(7) << "below" << std::setw(7) << "above";
    return line.str();
}

int cmd_mp(double q, std::size_t points, const fs::path& out_file, std::ostream& out) {
    const auto model = mp_bounds(q);
    out << "Q " << format_fixed(model.q) << '\n'
        << "lambda_minus " << format_fixed(model.lambda_minus) << '\n'
        << "lambda_plus " << format_fixed(model.lambda_plus) << '\n';
    if (out_file.has_parent_path()) {
        ensure_directory(out_file.parent_path());
    }
    write_table(out_file,
                [&](std::ostream& o) { write_density_curve(o, mp_density_curve(model, points)); });
    out << "density " << out_file.string() << '\n';
    return 0;
}

int cmd_surrogate(std::size_t n, std::size_t length, std::size_t seeds, std::uint64_t base_seed,
                  std::size_t bins, const fs::path& out_dir, std::ostream& out) {
    if (n < 2 || length < n) {
        throw Error("cli", "surrogate needs L >= N >= 2, got N = " + std::to_string(n) +
                               ", L = " + std::to_string(length));
    }
    if (seeds < 1) {
        throw Error("cli", "surrogate needs --seeds >= 1");
    }
    const auto result = compare_surrogates(n, length, seeds, base_seed, bins);
    ensure_directory(out_dir);

    double max_trace_deviation = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
        double trace = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            trace += result.eigenvalues[s * n + k];
        }
        max_trace_deviation = std::max(max_trace_deviation,
                                       std::abs(trace - static_cast<double>(n)));
    }

    write_table(out_dir / "surrogate_histogram.csv", [&](std::ostream& o) {
        o << "lambda,empirical_density,mp_density\n";
        for (std::size_t b = 0; b < result.empirical.size(); ++b) {
            o << format_fixed(result.empirical[b].center) << ','
              << format_fixed(result.empirical[b].density) << ','
              << format_fixed(result.analytic[b].density) << '\n';
        }
    });
    write_table(out_dir / "mp_density.csv",
                [&](std::ostream& o) { write_density_curve(o, mp_density_curve(result.model)); });
    write_table(out_dir / "surrogate_eigenvalues.csv", [&](std::ostream& o) {
        o << "seed,rank,eigenvalue\n";
        for (std::size_t s = 0; s < seeds; ++s) {
            for (std::size_t k = 0; k < n; ++k) {
                o << base_seed + s << ',' << k + 1 << ','
                  << format_fixed(result.eigenvalues[s * n + k]) << '\n';
            }
        }
    });

    out << "N " << n << "\nL " << length << "\nseeds " << seeds << "\nbase_seed " << base_seed
        << "\nQ " << format_fixed(result.model.q) << "\nlambda_minus "
        << format_fixed(result.model.lambda_minus) << "\nlambda_plus "
        << format_fixed(result.model.lambda_plus) << "\nl1_distance "
        << format_fixed(result.l1_distance) << "\nbulk_fraction "
        << format_fixed(result.bulk_fraction) << "\nmax_trace_deviation "
        << sci(max_trace_deviation) << '\n';
    return 0;
}

int cmd_compare(const fs::path& a, const fs::path& b, std::size_t rank, double floor,
                const fs::path& out_file, std::ostream& out) {
    const auto spectrum_a = load_report_spectrum(a);
    const auto spectrum_b = load_report_spectrum(b);
    const auto comparison = compare_vectors(spectrum_a, spectrum_b, rank, floor);
    if (out_file.has_parent_path()) {
        ensure_directory(out_file.parent_path());
    }
    write_table(out_file, [&](std::ostream& o) { write_comparison_table(o, comparison); });
    out << "rank " << rank << '\n'
        << "reoriented " << (comparison.b_reoriented ? "yes" : "no") << '\n'
        << "flipped " << comparison.flipped_count << " of " << comparison.components.size()
        << '\n'
        << "fraction " << format_fixed(comparison.flipped_fraction) << '\n'
        << "table " << out_file.string() << '\n';
    return 0;
}

int cmd_align(const fs::path& input, double theta, const fs::path& out_file, std::ostream& out) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw Error("cli", "--theta must lie in [0, 1]");
    }
    const auto raw = load_prices(input);
    const auto aligned = align(raw, theta);
    if (out_file.has_parent_path()) {
        ensure_directory(out_file.parent_path());
    }
    write_table(out_file, [&](std::ostream& o) { write_prices(o, aligned); });
    out << "raw_dates " << raw.num_dates() << '\n'
        << "retained_dates " << aligned.num_dates() << '\n'
        << "removed_dates " << raw.num_dates() - aligned.num_dates() << '\n'
        << "filled_cells " << aligned.fill_log.size() << '\n'
        << "tickers " << aligned.num_tickers() << '\n'
        << "output " << out_file.string() << '\n';
    return 0;
}

}  // namespace

fs::path default_out_dir() {
    if (const char* env = std::getenv(kOutDirVariable); env != nullptr && *env != '\0') {
        return env;
    }
    return kDefaultOutDir;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    auto temporary = path;
    temporary += ".tmp";
    {
        std::ofstream file(temporary, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw Error("cli", "cannot write '" + temporary.string() + "'");
        }
        file << content;
        if (!file.flush()) {
            throw Error("cli", "failed writing '" + temporary.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(temporary, path, ec);
    if (ec) {
        throw Error("cli", "cannot move '" + temporary.string() + "' to '" + path.string() +
                               "': " + ec.message());
    }
}

void validate(const RunConfig& config) {
    validate_windows(config.windows);
    if (!(config.theta >= 0.0 && config.theta <= 1.0)) {
        throw Error("config", "theta must lie in [0, 1], got " + std::to_string(config.theta));
    }
    if (!(config.bin_width > 0.0)) {
        throw Error("config", "bin width must be positive, got " +
                                  std::to_string(config.bin_width));
    }
    if (!(config.floor >= 0.0)) {
        throw Error("config", "flip floor must be >= 0");
    }
}

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
    validate(config);
    const auto aligned = align(load_prices(config.input), config.theta);
    ensure_directory(config.out_dir);

    write_table(config.out_dir / "aligned_prices.csv",
                [&](std::ostream& o) { write_prices(o, aligned); });
    {
        Json run = config_to_json({config.config_name, config.theta, config.bin_width,
                                   config.top_k, config.windows});
        run["input"] = config.input.string();
        run["floor"] = config.floor;
        run["aligned_dates"] = aligned.num_dates();
        run["filled_cells"] = aligned.fill_log.size();
        write_file_atomic(config.out_dir / "run.json", run.dump(2) + "\n");
    }

    const ReportConfig report_config{config.bin_width, config.top_k, 2};
    const std::size_t count = config.windows.size();
    std::vector<std::optional<WindowReport>> reports(count);
    std::vector<std::string> failures(count);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t w = next++; w < count; w = next++) {
            try {
                auto report = build_report(config.windows[w], aligned, report_config);
                write_window_outputs(config.out_dir, report);
                reports[w] = std::move(report);
            } catch (const std::exception& error) {
                failures[w] = error.what();
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(config.parallel, 1, count);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }

    std::ostringstream summary_csv;
    summary_csv << "window,n,t,q,lambda_minus,lambda_plus,lambda_max,mean_c,std_c,below,above\n";
    out << summary_header() << '\n';
    bool all_ok = true;
    for (std::size_t w = 0; w < count; ++w) {
        if (!reports[w]) {
            all_ok = false;
            err << "error: " << failures[w] << '\n';
            continue;
        }
        const auto& r = *reports[w];
        out << summary_line(r) << '\n';
        summary_csv << r.window.name << ',' << r.num_series() << ',' << r.num_observations << ','
                    << format_fixed(r.mp.q) << ',' << format_fixed(r.mp.lambda_minus) << ','
                    << format_fixed(r.mp.lambda_plus) << ','
                    << format_fixed(r.spectrum.eigenvalues(0)) << ','
                    << format_fixed(r.coefficients.mean) << ','
                    << format_fixed(r.coefficients.std_dev) << ','
                    << r.classification.below.size() << ',' << r.classification.above.size()
                    << '\n';
    }
    write_file_atomic(config.out_dir / "summary.csv", summary_csv.str());

    // Eigenvector sign flips between consecutive windows, ranks 1 and 2.
    for (std::size_t w = 0; w + 1 < count; ++w) {
        if (!reports[w] || !reports[w + 1]) {
            continue;
        }
        const auto& a = *reports[w];
        const auto& b = *reports[w + 1];
        const std::size_t ranks = std::min<std::size_t>(2, a.num_series());
        for (std::size_t rank = 1; rank <= ranks; ++rank) {
            const auto comparison = compare_vectors(a.spectrum, b.spectrum, rank, config.floor);
            write_table(config.out_dir / ("compare_" + file_safe(a.window.name) + "_" +
                                          file_safe(b.window.name) + "_rank" +
                                          std::to_string(rank) + ".csv"),
                        [&](std::ostream& o) { write_comparison_table(o, comparison); });
            out << "sign flips " << a.window.name << " -> " << b.window.name << " rank " << rank
                << ": " << comparison.flipped_count << " of " << comparison.components.size()
                << " (" << format_fixed(comparison.flipped_fraction) << ")\n";
        }
    }
    return all_ok ? 0 : 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"rmtx: random-matrix analysis of cross-correlations in return panels"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Align prices and write one report per window");
    std::string input;
    std::string config_path;
    std::string out_dir;
    double theta = kDefaultRemovalThreshold;
    double bin_width = kDefaultBinWidth;
    std::size_t top_k = 20;
    std::size_t parallel = 1;
    double floor = 0.0;
    analyze->add_option("--input", input, "Wide price table (date,<ticker>...)")->required();
    analyze->add_option("--config", config_path,
                        "Window configuration JSON (default: built-in crisis-2008)");
    auto* out_opt = analyze->add_option(
        "--out", out_dir, std::string("Output directory (default: $") + kOutDirVariable +
                              " or " + kDefaultOutDir + ")");
    auto* theta_opt = analyze->add_option(
        "--theta", theta,
        "Remove a date when the fraction of missing markets is >= theta (inclusive)");
    auto* bin_opt = analyze->add_option("--bin-width", bin_width,
                                        "Correlation-coefficient histogram bin width");
    auto* top_opt = analyze->add_option("--top-k", top_k,
                                        "Components listed per eigenvector table");
    analyze->add_option("--parallel", parallel, "Windows analyzed concurrently")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--floor", floor,
                        "Magnitude floor below which components are not tested for sign flips");

    // mp
    auto* mp = app.add_subcommand("mp", "Marchenko-Pastur bounds and density curve for a given Q");
    double q = 0.0;
    std::size_t points = kDefaultDensityPoints;
    std::string mp_out;
    mp->add_option("--q", q, "Q = L / N (must be >= 1)")->required();
    mp->add_option("--points", points, "Density samples across [lambda_- - 0.1, lambda_+ + 0.1]");
    auto* mp_out_opt = mp->add_option("--out", mp_out, "Density curve file");

    // surrogate
    auto* surrogate =
        app.add_subcommand("surrogate", "Averaged spectra of seeded Gaussian panels vs the MP law");
    std::size_t n = 0;
    std::size_t length = 0;
    std::size_t seeds = 1;
    std::uint64_t base_seed = 1;
    std::size_t bins = kDefaultSurrogateBins;
    std::string surrogate_out;
    surrogate->add_option("--n", n, "Number of series")->required();
    surrogate->add_option("--l", length, "Observations per series")->required();
    surrogate->add_option("--seeds", seeds, "Number of realizations");
    surrogate->add_option("--base-seed", base_seed, "Seed of the first realization");
    surrogate->add_option("--bins", bins, "Histogram bins");
    auto* surrogate_out_opt = surrogate->add_option("--out", surrogate_out, "Output directory");

    // compare
    auto* compare =
        app.add_subcommand("compare", "Eigenvector sign flips between two window reports");
    std::string report_a;
    std::string report_b;
    std::size_t rank = 0;
    double compare_floor = 0.0;
    std::string compare_out;
    compare->add_option("--a", report_a, "First report JSON")->required();
    compare->add_option("--b", report_b, "Second report JSON")->required();
    compare->add_option("--rank", rank, "Eigenvalue rank (1 = largest)")->required();
    compare->add_option("--floor", compare_floor, "Magnitude floor for the sign test");
    auto* compare_out_opt = compare->add_option("--out", compare_out, "Comparison table file");

    // align
    auto* align_cmd = app.add_subcommand("align", "Filter holidays and forward-fill a price table");
    std::string align_input;
    std::string align_out;
    double align_theta = kDefaultRemovalThreshold;
    align_cmd->add_option("--input", align_input, "Wide price table")->required();
    auto* align_out_opt = align_cmd->add_option("--out", align_out, "Aligned price table");
    align_cmd->add_option("--theta", align_theta,
                          "Remove a date when the fraction of missing markets is >= theta");

    std::vector<std::string> argv_storage{"rmtx"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& arg : argv_storage) {
        argv.push_back(arg.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& error) {
        return app.exit(error, out, err);
    }

    const auto out_or_default = [](const CLI::Option* opt, const std::string& value,
                                   const fs::path& fallback) {
        return opt->count() > 0 ? fs::path(value) : fallback;
    };

    try {
        if (analyze->parsed()) {
            ConfigFile file = config_path.empty() ? default_config() : load_config(config_path);
            RunConfig config;
            config.input = input;
            config.config_name = file.name;
            config.windows = std::move(file.windows);
            config.theta = theta_opt->count() > 0 ? theta : file.theta.value_or(theta);
            config.bin_width = bin_opt->count() > 0 ? bin_width : file.bin_width.value_or(bin_width);
            config.top_k = top_opt->count() > 0 ? top_k : file.top_k.value_or(top_k);
            config.floor = floor;
            config.parallel = parallel;
            config.out_dir = out_or_default(out_opt, out_dir, default_out_dir());
            return cmd_analyze(config, out, err);
        }
        if (mp->parsed()) {
            return cmd_mp(q, points,
                          out_or_default(mp_out_opt, mp_out, default_out_dir() / "mp_density.csv"),
                          out);
        }
        if (surrogate->parsed()) {
            return cmd_surrogate(n, length, seeds, base_seed, bins,
                                 out_or_default(surrogate_out_opt, surrogate_out,
                                                default_out_dir() / "surrogate"),
                                 out);
        }
        if (compare->parsed()) {
            return cmd_compare(report_a, report_b, rank, compare_floor,
                               out_or_default(compare_out_opt, compare_out,
                                              default_out_dir() /
                                                  ("compare_rank" + std::to_string(rank) + ".csv")),
                               out);
        }
        if (align_cmd->parsed()) {
            return cmd_align(align_input, align_theta,
                             out_or_default(align_out_opt, align_out,
                                            default_out_dir() / "aligned_prices.csv"),
                             out);
        }
    } catch (const std::exception& error) {
        err << "error: " << error.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace rmtx::cli
