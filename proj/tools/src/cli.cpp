#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "bubbletda/io.hpp"
#include "bubbletda/landscape.hpp"
#include "bubbletda/lppls.hpp"
#include "bubbletda/lppls_fit.hpp"
#include "bubbletda/segmentation.hpp"
#include "bubbletda/tda_pipeline.hpp"

namespace bubbletda::cli {
namespace {

namespace fs = std::filesystem;

struct SynthOptions {
    LpplsParams params{637.0, 0.3003, 6.889, 11.11, -2.937e-4, 4.372e-5, -3.362e-5};
    std::size_t n_points = 637;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string output = "-";
};

struct SegmentOptions {
    std::string mode = "volatility";
    double eps0 = 15.0;
    std::size_t w0 = 240;
    std::size_t min_segment_len = 48;
    std::string direction = "up";
    std::string volatility_source = "returns";
    std::optional<std::size_t> start;
    std::vector<std::string> cuts;
    bool drop_warmup = false;
    bool consensus = false;
    std::string eps0_range = "10:20:5";
    std::string w0_range = "120:360:5";
};

struct TdaOptions {
    std::vector<std::size_t> windows{72};
    std::size_t delay = 5;
    std::size_t dim = 4;
    std::string p = "1";
    bool use_price = false;
};

struct FitOptions {
    std::uint64_t seed = 1;
    std::size_t population = 30;
    std::size_t generations = 500;
    double F = 0.8;
    double CR = 0.9;
    bool no_polish = false;
    std::optional<double> tc_min, tc_max;
    double m_min = 0.01, m_max = 0.99;
    double omega_min = 2.0, omega_max = 25.0;
};

struct Options {
    std::string config;
    std::string input;
    std::string output = "-";
    std::string out_dir = ".";
    std::string residuals;
    std::optional<std::size_t> start, end;
    unsigned threads = 0;
    SynthOptions synth;
    SegmentOptions segment;
    TdaOptions tda;
    FitOptions fit;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- options

void add_config(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config,
                    "Flat `key = value` file; keys are long flag names without dashes. Flags override it.");
}

void add_input(CLI::App* cmd, Options& o) {
    cmd->add_option("-i,--input", o.input, "Input CSV with a price (or close) or log_price column")->required();
}

void add_bounds(CLI::App* cmd, Options& o) {
    cmd->add_option("--start", o.start, "First sample of the segment (inclusive, default 0)");
    cmd->add_option("--end", o.end, "Last sample of the segment (inclusive, default last row)");
}

void add_threads(CLI::App* cmd, Options& o) {
    cmd->add_option("--threads", o.threads, "Worker threads, 0 = hardware concurrency");
}

void add_segment_options(CLI::App* cmd, SegmentOptions& s) {
    cmd->add_option("--mode", s.mode, "Tolerance mode")->check(CLI::IsMember({"volatility", "constant"}));
    cmd->add_option("--eps0", s.eps0, "Constant tolerance, or multiple of the rolling volatility")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--w0", s.w0, "Volatility lookback in samples")->check(CLI::Range(2, 1 << 30));
    cmd->add_option("--min-segment-len", s.min_segment_len, "Drop segments shorter than this");
    cmd->add_option("--direction", s.direction, "Direction of the first trend")
        ->check(CLI::IsMember({"up", "down"}));
    cmd->add_option("--volatility-source", s.volatility_source, "Quantity whose rolling std scales eps0")
        ->check(CLI::IsMember({"returns", "log_price"}));
    cmd->add_option("--segment-start", s.start, "Index where the first trend starts (default w0, or 0 in constant mode)");
    cmd->add_option("--cut", s.cuts, "END:INDEX moves the start of the segment ending at END to INDEX")
        ->delimiter(',');
    cmd->add_flag("--drop-warmup", s.drop_warmup, "Drop the first (warm-up) segment");
    cmd->add_flag("--consensus", s.consensus, "Also rank extrema over an (eps0, w0) grid");
    cmd->add_option("--eps0-range", s.eps0_range, "Consensus grid LO:HI:SAMPLES for eps0");
    cmd->add_option("--w0-range", s.w0_range, "Consensus grid LO:HI:SAMPLES for w0");
}

void add_tda_options(CLI::App* cmd, TdaOptions& t) {
    cmd->add_option("-w,--window", t.windows, "Window size(s) in delay vectors; a list runs a sweep")
        ->delimiter(',')
        ->check(CLI::Range(2, 1 << 20));
    cmd->add_option("-d,--delay", t.delay, "Embedding delay")->check(CLI::Range(1, 1 << 20));
    cmd->add_option("-N,--dim", t.dim, "Embedding dimension")->check(CLI::Range(2, 1 << 10));
    cmd->add_option("--p", t.p, "Landscape norm order (>= 1, or inf)");
    cmd->add_flag("--use-price", t.use_price, "Embed raw prices instead of log-prices");
}

void add_fit_options(CLI::App* cmd, FitOptions& f) {
    cmd->add_option("--seed", f.seed, "Seed for the differential evolution search");
    cmd->add_option("--population", f.population, "DE population size")->check(CLI::Range(4, 100000));
    cmd->add_option("--generations", f.generations, "Maximum DE generations");
    cmd->add_option("--F", f.F, "DE differential weight");
    cmd->add_option("--CR", f.CR, "DE crossover rate");
    cmd->add_flag("--no-polish", f.no_polish, "Skip the Nelder-Mead polish");
    cmd->add_option("--tc-min", f.tc_min, "Lower tc bound, segment-relative (default n - 1 + 1e-3)");
    cmd->add_option("--tc-max", f.tc_max, "Upper tc bound, segment-relative (default n - 1 + n/2)");
    cmd->add_option("--m-min", f.m_min, "Lower m bound");
    cmd->add_option("--m-max", f.m_max, "Upper m bound");
    cmd->add_option("--omega-min", f.omega_min, "Lower omega bound");
    cmd->add_option("--omega-max", f.omega_max, "Upper omega bound");
}

std::unique_ptr<CLI::App> make_app(Options& o) {
    auto app = std::make_unique<CLI::App>("Bubble diagnostics for price series: LPPLS fits, trend segmentation "
                                          "and persistence-landscape signals.",
                                          "bubbletda");
    app->require_subcommand(1);

    auto* synth = app->add_subcommand("synth", "Write a synthetic LPPLS log-price series as t,log_price");
    add_config(synth, o);
    auto& p = o.synth.params;
    synth->add_option("--tc", p.tc, "Critical time");
    synth->add_option("--m", p.m, "Power-law exponent in (0, 1)");
    synth->add_option("--omega", p.omega, "Log-periodic angular frequency");
    synth->add_option("--A", p.A, "Log-price at the critical time");
    synth->add_option("--B", p.B, "Power-law amplitude; negative for a positive bubble");
    synth->add_option("--C1", p.C1, "Cosine amplitude");
    synth->add_option("--C2", p.C2, "Sine amplitude");
    synth->add_option("-n,--n-points", o.synth.n_points, "Number of samples at t = 0, 1, ...")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    synth->add_option("--sigma", o.synth.sigma, "Standard deviation of Gaussian noise")->check(CLI::NonNegativeNumber);
    synth->add_option("--seed", o.synth.seed, "Noise seed");
    synth->add_option("-o,--output", o.output, "Output CSV, - for stdout");

    auto* segment = app->add_subcommand("segment", "Split a price series into alternating trends");
    add_config(segment, o);
    add_input(segment, o);
    segment->add_option("--out-dir", o.out_dir, "Directory for events.csv, segments.csv and consensus.csv");
    add_segment_options(segment, o.segment);
    add_threads(segment, o);

    auto* tda = app->add_subcommand("tda", "Sliding-window persistence landscape norms");
    add_config(tda, o);
    add_input(tda, o);
    tda->add_option("-o,--output", o.output, "Output CSV, - for stdout");
    add_bounds(tda, o);
    add_tda_options(tda, o.tda);
    add_threads(tda, o);

    auto* fit = app->add_subcommand("fit", "Fit the LPPLS model to a log-price segment");
    add_config(fit, o);
    add_input(fit, o);
    fit->add_option("-o,--output", o.output, "Fit report JSON, - for stdout");
    fit->add_option("--residuals", o.residuals, "Optional CSV of fitted values and residuals");
    add_bounds(fit, o);
    add_fit_options(fit, o.fit);

    auto* report = app->add_subcommand("report", "Segment, then fit and compute norms for every segment");
    add_config(report, o);
    add_input(report, o);
    report->add_option("--out-dir", o.out_dir, "Directory for the per-segment bundle");
    add_segment_options(report, o.segment);
    add_tda_options(report, o.tda);
    add_fit_options(report, o.fit);
    add_threads(report, o);
    return app;
}

// ---------------------------------------------------------------- config

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

// `--key=value` arguments for config entries not already given on the command line.
std::vector<std::string> config_arguments(const CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    std::vector<std::string> extra;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const CLI::Option* opt = key == "config" ? nullptr : cmd.get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "' for command " +
                             cmd.get_name());
        }
        if (opt->count() == 0) extra.push_back("--" + key + "=" + value);
    }
    return extra;
}

// ---------------------------------------------------------------- helpers

struct Output {
    explicit Output(const std::string& path, std::ostream& out) : path_(path) {
        if (path == "-") {
            stream_ = &out;
        } else {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }
    void close() {
        stream_->flush();
        if (!*stream_) throw std::runtime_error("failed writing " + path_);
        if (file_.is_open()) file_.close();
    }

private:
    std::string path_;
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

std::pair<std::size_t, std::size_t> resolve_bounds(const Options& o, std::size_t length) {
    const std::size_t start = o.start.value_or(0);
    const std::size_t end = o.end.value_or(length - 1);
    if (end >= length) {
        throw UsageError("--end " + std::to_string(end) + " is past the last row " + std::to_string(length - 1));
    }
    if (start > end) throw UsageError("--start must not exceed --end");
    return {start, end};
}

double parse_p(const std::string& text) {
    if (text == "inf" || text == "infinity") return kInfinityNorm;
    std::size_t used = 0;
    double p = 0.0;
    try {
        p = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(p >= 1.0)) throw UsageError("--p must be a number >= 1 or inf, got '" + text + "'");
    return p;
}

template <class T>
std::tuple<T, T, std::size_t> parse_range(const std::string& text, const std::string& flag) {
    std::istringstream in(text);
    T lo{}, hi{};
    std::size_t n = 0;
    char c1 = 0, c2 = 0;
    if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || !in.eof() || n == 0 || hi < lo) {
        throw UsageError(flag + " expects LO:HI:SAMPLES, got '" + text + "'");
    }
    return {lo, hi, n};
}

SegmentationConfig segmentation_config(const SegmentOptions& s) {
    SegmentationConfig cfg;
    cfg.tolerance_mode = s.mode == "constant" ? ToleranceMode::constant : ToleranceMode::volatility;
    cfg.eps0 = s.eps0;
    cfg.w0 = s.w0;
    cfg.min_segment_len = s.min_segment_len;
    cfg.initial_direction = s.direction == "down" ? TrendDirection::down : TrendDirection::up;
    cfg.volatility_source = s.volatility_source == "log_price" ? VolatilitySource::log_price : VolatilitySource::returns;
    cfg.start_index = s.start;
    return cfg;
}

AdjustConfig adjust_config(const SegmentOptions& s) {
    AdjustConfig adjust{s.min_segment_len, {}, s.drop_warmup};
    for (const auto& text : s.cuts) {
        const auto colon = text.find(':');
        try {
            if (colon == std::string::npos) throw std::invalid_argument(text);
            std::size_t used_a = 0, used_b = 0;
            const auto end = std::stoull(text.substr(0, colon), &used_a);
            const auto cut = std::stoull(text.substr(colon + 1), &used_b);
            if (used_a != colon || used_b != text.size() - colon - 1) throw std::invalid_argument(text);
            adjust.cuts.push_back({end, cut});
        } catch (const std::exception&) {
            throw UsageError("--cut expects END:INDEX, got '" + text + "'");
        }
    }
    return adjust;
}

TdaConfig tda_config(const TdaOptions& t, std::size_t window, unsigned threads) {
    TdaConfig cfg;
    cfg.embedding = {t.dim, t.delay, window};
    cfg.p = parse_p(t.p);
    cfg.threads = threads;
    return cfg;
}

DeConfig de_config(const FitOptions& f) {
    DeConfig cfg;
    cfg.population_size = f.population;
    cfg.max_generations = f.generations;
    cfg.differential_weight = f.F;
    cfg.crossover_rate = f.CR;
    cfg.seed = f.seed;
    cfg.local_polish = !f.no_polish;
    cfg.validate();
    return cfg;
}

FitBounds fit_bounds(const FitOptions& f, std::size_t n) {
    auto bounds = FitBounds::defaults(n);
    if (f.tc_min) bounds.tc.lo = *f.tc_min;
    if (f.tc_max) bounds.tc.hi = *f.tc_max;
    bounds.m = {f.m_min, f.m_max};
    bounds.omega = {f.omega_min, f.omega_max};
    bounds.validate(static_cast<double>(n - 1));
    return bounds;
}

nlohmann::ordered_json fit_json(const FitResult& fit, std::size_t n) {
    const auto& p = fit.params;
    return {{"tc", p.tc}, {"m", p.m},     {"omega", p.omega}, {"A", p.A},       {"B", p.B},
            {"C1", p.C1}, {"C2", p.C2},   {"rss", fit.rss},   {"n", n},         {"converged", fit.converged}};
}

void write_residuals(std::ostream& os, const FitResult& fit, std::span<const double> y, std::size_t offset) {
    os << "index,t,log_price,fitted,residual\n";
    for (std::size_t t = 0; t < y.size(); ++t) {
        os << offset + t << ',' << t << ',' << format_double(y[t]) << ',' << format_double(fit.fitted[t]) << ','
           << format_double(fit.residuals[t]) << '\n';
    }
}

void write_norms(std::ostream& os, const SignalSeries& signal, std::size_t offset) {
    os << "window_start,window_end,norm\n";
    for (std::size_t t = 0; t < signal.size(); ++t) {
        os << offset + signal.window_start[t] << ',' << offset + signal.window_end[t] << ','
           << format_double(signal.values[t]) << '\n';
    }
}

void write_events(std::ostream& os, const SegmentationResult& result) {
    os << "kind,extremum_index,crossing_index\n";
    for (const auto& e : result.events) {
        os << to_string(e.kind) << ',' << e.extremum_index << ',' << e.crossing_index << '\n';
    }
    if (result.open_trend) {
        const bool up = result.open_trend->direction == TrendDirection::up;
        os << (up ? "peak" : "trough") << ',' << result.open_trend->extremum_index << ",\n";
    }
}

void write_segments(std::ostream& os, const std::vector<BubbleSegment>& segments) {
    os << "start,end,direction\n";
    for (const auto& s : segments) os << s.start << ',' << s.end << ',' << to_string(s.direction) << '\n';
}

std::vector<ConsensusExtremum> run_consensus(std::span<const double> prices, const SegmentOptions& s,
                                             unsigned threads) {
    const auto [e_lo, e_hi, e_n] = parse_range<double>(s.eps0_range, "--eps0-range");
    const auto [w_lo, w_hi, w_n] = parse_range<std::size_t>(s.w0_range, "--w0-range");
    return consensus_segmentation(prices, {e_lo, e_hi, e_n, w_lo, w_hi, w_n, threads}, segmentation_config(s));
}

std::vector<double> values_for_tda(const PriceSeries& series, const TdaOptions& t) {
    return t.use_price ? series.prices() : series.log_prices();
}

// ---------------------------------------------------------------- commands

void cmd_synth(const Options& o, std::ostream& out) {
    const auto series = generate_synthetic(o.synth.params, {o.synth.n_points, o.synth.sigma, o.synth.seed});
    Output file(o.output, out);
    write_log_price_csv(*file, series);
    file.close();
}

void cmd_segment(const Options& o) {
    const auto series = read_series_csv(fs::path(o.input));
    const auto prices = series.prices();
    const auto adjust = adjust_config(o.segment);
    const auto result = segment(prices, segmentation_config(o.segment));
    const auto segments = adjust_segments(result.raw_segments, adjust);
    fs::create_directories(o.out_dir);
    std::ostringstream sink;
    Output events((fs::path(o.out_dir) / "events.csv").string(), sink);
    write_events(*events, result);
    events.close();
    Output segs((fs::path(o.out_dir) / "segments.csv").string(), sink);
    write_segments(*segs, segments);
    segs.close();
    if (o.segment.consensus) {
        Output ranked((fs::path(o.out_dir) / "consensus.csv").string(), sink);
        *ranked << "kind,index,count\n";
        for (const auto& c : run_consensus(prices, o.segment, o.threads)) {
            *ranked << to_string(c.kind) << ',' << c.index << ',' << c.count << '\n';
        }
        ranked.close();
    }
}

void cmd_tda(const Options& o, std::ostream& out) {
    const auto series = read_series_csv(fs::path(o.input));
    const auto [start, end] = resolve_bounds(o, series.size());
    const auto values = values_for_tda(series, o.tda);
    const std::span<const double> segment(values.data() + start, end - start + 1);

    std::vector<SignalSeries> signals;
    for (std::size_t w : o.tda.windows) signals.push_back(norms_over_windows(segment, tda_config(o.tda, w, o.threads)));

    Output file(o.output, out);
    if (signals.size() == 1) {
        write_norms(*file, signals[0], start);
    } else {
        // Sweep: one row per window end index, one column per window size.
        std::map<std::size_t, std::vector<std::optional<double>>> rows;
        for (std::size_t k = 0; k < signals.size(); ++k) {
            for (std::size_t t = 0; t < signals[k].size(); ++t) {
                auto& row = rows[start + signals[k].window_end[t]];
                row.resize(signals.size());
                row[k] = signals[k].values[t];
            }
        }
        *file << "window_end";
        for (std::size_t w : o.tda.windows) *file << ",norm_w" << w;
        *file << '\n';
        for (auto& [index, row] : rows) {
            row.resize(signals.size());
            *file << index;
            for (const auto& v : row) *file << ',' << (v ? format_double(*v) : "");
            *file << '\n';
        }
    }
    file.close();
}

void cmd_fit(const Options& o, std::ostream& out) {
    const auto series = read_series_csv(fs::path(o.input));
    const auto [start, end] = resolve_bounds(o, series.size());
    const auto logs = series.log_prices();
    const std::span<const double> y(logs.data() + start, end - start + 1);
    const auto fit = fit_segment(y, fit_bounds(o.fit, y.size()), de_config(o.fit));

    Output report(o.output, out);
    *report << fit_json(fit, y.size()).dump(2) << '\n';
    report.close();
    if (!o.residuals.empty()) {
        Output residuals(o.residuals, out);
        write_residuals(*residuals, fit, y, start);
        residuals.close();
    }
}

void cmd_report(const Options& o) {
    const auto series = read_series_csv(fs::path(o.input));
    const auto prices = series.prices();
    const auto logs = series.log_prices();
    const auto tda_values = values_for_tda(series, o.tda);
    const auto adjust = adjust_config(o.segment);
    const auto de = de_config(o.fit);
    if (o.tda.windows.size() != 1) throw UsageError("report takes a single --window");
    const auto tda = tda_config(o.tda, o.tda.windows[0], o.threads);
    const auto result = segment(prices, segmentation_config(o.segment));
    const auto segments = adjust_segments(result.raw_segments, adjust);

    const fs::path dir(o.out_dir);
    fs::create_directories(dir);
    std::ostringstream sink;
    Output events((dir / "events.csv").string(), sink);
    write_events(*events, result);
    events.close();

    Output summary((dir / "segments.csv").string(), sink);
    *summary << "start,end,direction,n,tc,m,omega,rss,converged,peak_index,peak_value,peak_position\n";
    for (const auto& seg : segments) {
        const std::string stem = "segment_" + std::to_string(seg.start) + "_" + std::to_string(seg.end);
        const std::size_t n = seg.end - seg.start + 1;
        *summary << seg.start << ',' << seg.end << ',' << to_string(seg.direction) << ',' << n;

        if (n >= 20) {
            const std::span<const double> y(logs.data() + seg.start, n);
            const auto fit = fit_segment(y, fit_bounds(o.fit, n), de);
            Output json((dir / (stem + "_fit.json")).string(), sink);
            *json << fit_json(fit, n).dump(2) << '\n';
            json.close();
            Output residuals((dir / (stem + "_residuals.csv")).string(), sink);
            write_residuals(*residuals, fit, y, seg.start);
            residuals.close();
            const auto& p = fit.params;
            *summary << ',' << format_double(p.tc) << ',' << format_double(p.m) << ',' << format_double(p.omega) << ','
                     << format_double(fit.rss) << ',' << (fit.converged ? "true" : "false");
        } else {
            *summary << ",,,,,";
        }

        if (n >= min_series_length(tda.embedding)) {
            const auto signal = norms_over_windows(std::span<const double>(tda_values.data() + seg.start, n), tda);
            Output norms((dir / (stem + "_norms.csv")).string(), sink);
            write_norms(*norms, signal, seg.start);
            norms.close();
            const auto peak = peak_report(signal);
            *summary << ',' << seg.start + signal.window_end[peak.index] << ',' << format_double(peak.value) << ','
                     << format_double(peak.position);
        } else {
            *summary << ",,,";
        }
        *summary << '\n';
    }
    summary.close();
}

std::vector<std::string> reversed(std::vector<std::string> args) {
    std::reverse(args.begin(), args.end());
    return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options options;
    auto app = make_app(options);
    try {
        app->parse(reversed(args));
        const auto chosen = app->get_subcommands();
        if (!chosen.empty() && !options.config.empty()) {
            auto extra = config_arguments(*chosen.front(), options.config);
            if (!extra.empty()) {
                auto merged = args;
                merged.insert(merged.end(), extra.begin(), extra.end());
                options = Options{};
                app = make_app(options);
                app->parse(reversed(merged));
            }
        }
    } catch (const CLI::ParseError& e) {
        return app->exit(e, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const std::string command = app->get_subcommands().front()->get_name();
    try {
        if (command == "synth") cmd_synth(options, out);
        else if (command == "segment") cmd_segment(options);
        else if (command == "tda") cmd_tda(options, out);
        else if (command == "fit") cmd_fit(options, out);
        else cmd_report(options);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace bubbletda::cli
