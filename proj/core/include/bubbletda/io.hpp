/**
 * @file io.hpp
 * @brief CSV ingestion of price series and number formatting for emitted files.
 *
 * Input files need a header row naming a `price` or `log_price` column; an optional
 * `timestamp` column is carried through untouched. Row order defines the sample index.
 * Both LF and CRLF line endings are accepted.
 */
#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bubbletda {

class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& source, std::size_t line, const std::string& what);
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

enum class SeriesKind { price, log_price };

struct PriceSeries {
    SeriesKind kind = SeriesKind::price;
    std::vector<double> values;
    std::vector<std::string> timestamps;  ///< empty when the file has no timestamp column

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] std::vector<double> log_prices() const;
    [[nodiscard]] std::vector<double> prices() const;
};

[[nodiscard]] PriceSeries read_series_csv(std::istream& in, const std::string& source = "<stream>");
[[nodiscard]] PriceSeries read_series_csv(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

/// Header `t,log_price`, one row per sample.
void write_log_price_csv(std::ostream& os, std::span<const double> log_prices);

}  // namespace bubbletda
