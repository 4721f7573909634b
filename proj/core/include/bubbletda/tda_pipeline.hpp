/**
 * @file tda_pipeline.hpp
 * @brief Sliding-window landscape norms of a scalar series.
 *
 * Each window of delay vectors is turned into an H1 persistence diagram, then a
 * persistence landscape, whose Lp norm forms one sample of the signal series.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bubbletda/embedding.hpp"
#include "bubbletda/persistence.hpp"

namespace bubbletda {

struct TdaConfig {
    EmbeddingConfig embedding;
    double p = 1.0;  ///< norm order, >= 1 or kInfinityNorm
    RipsConfig rips;
    unsigned threads = 0;  ///< 0 selects std::thread::hardware_concurrency()
};

struct SignalSeries {
    std::vector<double> values;
    std::vector<std::size_t> window_start;  ///< first series index covered by each window
    std::vector<std::size_t> window_end;    ///< last series index covered by each window

    [[nodiscard]] std::size_t size() const { return values.size(); }
};

/// Landscape norm of the H1 diagram of one point cloud.
[[nodiscard]] double window_norm(const PointCloud& cloud, const TdaConfig& cfg);

/**
 * Norm series over all K windows. Output is identical for any thread count.
 *
 * Throws std::invalid_argument when the series is shorter than (N-1)d + w.
 */
[[nodiscard]] SignalSeries norms_over_windows(std::span<const double> series, const TdaConfig& cfg);

struct PeakReport {
    std::size_t index = 0;
    double value = 0.0;
    double position = 0.0;  ///< index / (K - 1), 0 when K == 1
};

/// Earliest argmax of the signal. Throws std::invalid_argument when empty.
[[nodiscard]] PeakReport peak_report(std::span<const double> values);
[[nodiscard]] PeakReport peak_report(const SignalSeries& signal);

}  // namespace bubbletda
