/**
 * @file segmentation.hpp
 * @brief Splits a price series into alternating upward and downward trends.
 *
 * A trend starting at i0 ends the first time the drawdown (upward trend) or drawup
 * (downward trend) of the cumulative log-return exceeds the tolerance eps_i. The
 * extremum reached before that crossing is the peak or trough that closes the trend
 * and starts the next one.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace bubbletda {

enum class TrendDirection { up, down };
enum class ToleranceMode { constant, volatility };
enum class VolatilitySource { returns, log_price };
enum class EventKind { peak, trough };

const char* to_string(TrendDirection direction);
const char* to_string(EventKind kind);

struct SegmentationConfig {
    ToleranceMode tolerance_mode = ToleranceMode::volatility;
    double eps0 = 15.0;   ///< constant tolerance, or scale on sigma_i
    std::size_t w0 = 240; ///< volatility lookback, samples
    std::size_t min_segment_len = 48;
    TrendDirection initial_direction = TrendDirection::up;
    VolatilitySource volatility_source = VolatilitySource::returns;
    /// First trend start. Defaults to w0 in volatility mode and 0 in constant mode.
    std::optional<std::size_t> start_index;
};

void validate(const SegmentationConfig& cfg);

struct TrendEvent {
    EventKind kind = EventKind::peak;
    std::size_t extremum_index = 0;
    std::size_t crossing_index = 0;
    std::size_t trend_start = 0;  ///< i0 of the trend this event closes
    friend bool operator==(const TrendEvent&, const TrendEvent&) = default;
};

/// Trend still running at the end of the data.
struct OpenTrend {
    TrendDirection direction = TrendDirection::up;
    std::size_t trend_start = 0;
    std::size_t extremum_index = 0;  ///< running extremum so far
};

struct BubbleSegment {
    std::size_t start = 0;
    std::size_t end = 0;
    TrendDirection direction = TrendDirection::up;
    bool warmup = false;  ///< first segment, overlapping the initialisation period

    [[nodiscard]] std::size_t length() const { return end - start; }
    friend bool operator==(const BubbleSegment&, const BubbleSegment&) = default;
};

struct SegmentationResult {
    std::vector<TrendEvent> events;
    std::vector<BubbleSegment> raw_segments;
    std::optional<OpenTrend> open_trend;
};

/// p_i = ln x_i - ln x_{i-1}. Throws std::invalid_argument on a non-positive price or L < 2.
[[nodiscard]] std::vector<double> log_returns(std::span<const double> prices);

/**
 * Trailing sample standard deviation indexed by price index.
 *
 * Entry i (for i >= w0) is the standard deviation of returns p_{i-w0+1}, ..., p_i,
 * i.e. returns[i-w0 .. i-1]; earlier entries are NaN. The result has
 * returns.size() + 1 entries. Throws when returns.size() < w0 or w0 < 2.
 */
[[nodiscard]] std::vector<double> rolling_volatility(std::span<const double> returns, std::size_t w0);

/// Trailing standard deviation of log-prices over [i-w0+1, i], NaN for i < w0.
[[nodiscard]] std::vector<double> rolling_log_price_volatility(std::span<const double> log_prices,
                                                               std::size_t w0);

/// delta_{i0,i}: drawdown from the running maximum (up) or drawup from the running minimum (down).
[[nodiscard]] double largest_deviation(std::span<const double> cum_returns, std::size_t i0,
                                       std::size_t i, TrendDirection direction);

/// Per-index tolerance eps_i for the given prices and configuration.
[[nodiscard]] std::vector<double> tolerance_series(std::span<const double> prices,
                                                   const SegmentationConfig& cfg);

[[nodiscard]] SegmentationResult segment(std::span<const double> prices, const SegmentationConfig& cfg);

/**
 * Trend segments from events: a trend ends at its extremum and starts at the crossing
 * index of the preceding opposite trend, or at its own start when that crossing is
 * not strictly before the extremum. The first segment is marked as warm-up.
 */
[[nodiscard]] std::vector<BubbleSegment> build_segments(const std::vector<TrendEvent>& events,
                                                        std::size_t first_start);

/// Moves the start of the segment ending at `segment_end` to `cut_index`.
struct SegmentCut {
    std::size_t segment_end = 0;
    std::size_t cut_index = 0;
};

struct AdjustConfig {
    std::size_t min_segment_len = 0;
    std::vector<SegmentCut> cuts;
    bool drop_warmup = false;
};

/// Applies cuts, then drops warm-up (if requested) and segments shorter than min_segment_len.
/// Throws std::invalid_argument when a cut matches no segment or lies outside [start, end).
[[nodiscard]] std::vector<BubbleSegment> adjust_segments(std::vector<BubbleSegment> segments,
                                                         const AdjustConfig& cfg);

struct ConsensusExtremum {
    EventKind kind = EventKind::peak;
    std::size_t index = 0;
    std::size_t count = 0;
    friend bool operator==(const ConsensusExtremum&, const ConsensusExtremum&) = default;
};

struct ConsensusGrid {
    double eps0_min = 10.0;
    double eps0_max = 20.0;
    std::size_t eps0_samples = 5;
    std::size_t w0_min = 120;
    std::size_t w0_max = 360;
    std::size_t w0_samples = 5;
    unsigned threads = 0;
};

/// Segments over the (eps0, w0) grid and ranks extrema by how many cells produced them.
/// Same-kind indices within +-2 samples of a more frequent index are merged into it.
/// Sorted by count descending, then index ascending.
[[nodiscard]] std::vector<ConsensusExtremum> consensus_segmentation(std::span<const double> prices,
                                                                    const ConsensusGrid& grid,
                                                                    const SegmentationConfig& base);

}  // namespace bubbletda
