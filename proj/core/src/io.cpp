#include "bubbletda/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

namespace bubbletda {
namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    for (;;) {
        const auto comma = line.find(',', begin);
        fields.push_back(trim(line.substr(begin, comma - begin)));
        if (comma == std::string::npos) break;
        begin = comma + 1;
    }
    return fields;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

CsvError::CsvError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::vector<double> PriceSeries::log_prices() const {
    if (kind == SeriesKind::log_price) return values;
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](double v) { return std::log(v); });
    return out;
}

std::vector<double> PriceSeries::prices() const {
    if (kind == SeriesKind::price) return values;
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](double v) { return std::exp(v); });
    return out;
}

PriceSeries read_series_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> value_col, time_col;
    std::size_t columns = 0;
    PriceSeries series;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) continue;
        const auto fields = split(line);

        if (!value_col) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                const auto name = lower(fields[i]);
                if (name == "price" || name == "close") {
                    value_col = i;
                    series.kind = SeriesKind::price;
                } else if (name == "log_price") {
                    value_col = i;
                    series.kind = SeriesKind::log_price;
                } else if (name == "timestamp") {
                    time_col = i;
                }
            }
            if (!value_col) {
                throw CsvError(source, line_no, "header must name a `price` or `log_price` column");
            }
            columns = fields.size();
            continue;
        }

        if (fields.size() != columns) {
            throw CsvError(source, line_no, "expected " + std::to_string(columns) + " fields, found " +
                                                std::to_string(fields.size()));
        }
        const std::string& text = fields[*value_col];
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
            throw CsvError(source, line_no, "cannot parse value '" + text + "'");
        }
        if (series.kind == SeriesKind::price && !(value > 0.0)) {
            throw CsvError(source, line_no, "price must be positive, got '" + text + "'");
        }
        series.values.push_back(value);
        if (time_col) series.timestamps.push_back(fields[*time_col]);
    }
    if (!value_col) {
        throw CsvError(source, std::max<std::size_t>(line_no, 1), "empty input: no header row");
    }
    if (series.values.empty()) {
        throw CsvError(source, line_no, "no data rows");
    }
    return series;
}

PriceSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open input file " + path.string());
    }
    return read_series_csv(in, path.string());
}

std::string format_double(double value) {
    std::array<char, 64> buffer{};
    const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return ec == std::errc() ? std::string(buffer.data(), ptr) : std::string("nan");
}

void write_log_price_csv(std::ostream& os, std::span<const double> log_prices) {
    os << "t,log_price\n";
    for (std::size_t t = 0; t < log_prices.size(); ++t) {
        os << t << ',' << format_double(log_prices[t]) << '\n';
    }
}

}  // namespace bubbletda
