#include "bubbletda/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>

namespace bubbletda {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sample_std(std::span<const double> values) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::vector<double> to_log(std::span<const double> prices) {
    std::vector<double> out(prices.size());
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !std::isfinite(prices[i])) {
            throw std::invalid_argument("price at index " + std::to_string(i) +
                                        " must be positive and finite");
        }
        out[i] = std::log(prices[i]);
    }
    return out;
}

std::size_t first_start(const SegmentationConfig& cfg) {
    if (cfg.start_index) return *cfg.start_index;
    return cfg.tolerance_mode == ToleranceMode::volatility ? cfg.w0 : 0;
}

}  // namespace

const char* to_string(TrendDirection direction) {
    return direction == TrendDirection::up ? "up" : "down";
}

const char* to_string(EventKind kind) { return kind == EventKind::peak ? "peak" : "trough"; }

void validate(const SegmentationConfig& cfg) {
    if (!(cfg.eps0 > 0.0) || !std::isfinite(cfg.eps0)) {
        throw std::invalid_argument("eps0 must be positive");
    }
    if (cfg.w0 < 2) {
        throw std::invalid_argument("volatility window w0 must be at least 2");
    }
}

std::vector<double> log_returns(std::span<const double> prices) {
    if (prices.size() < 2) {
        throw std::invalid_argument("log returns need at least 2 prices");
    }
    const auto logs = to_log(prices);
    std::vector<double> out(prices.size() - 1);
    for (std::size_t i = 1; i < logs.size(); ++i) {
        out[i - 1] = logs[i] - logs[i - 1];
    }
    return out;
}

std::vector<double> rolling_volatility(std::span<const double> returns, std::size_t w0) {
    if (w0 < 2) {
        throw std::invalid_argument("volatility window w0 must be at least 2");
    }
    if (returns.size() < w0) {
        throw std::invalid_argument("need at least w0 = " + std::to_string(w0) + " returns, got " +
                                    std::to_string(returns.size()));
    }
    std::vector<double> sigma(returns.size() + 1, kNaN);
    for (std::size_t i = w0; i <= returns.size(); ++i) {
        sigma[i] = sample_std(returns.subspan(i - w0, w0));
    }
    return sigma;
}

std::vector<double> rolling_log_price_volatility(std::span<const double> log_prices, std::size_t w0) {
    if (w0 < 2) {
        throw std::invalid_argument("volatility window w0 must be at least 2");
    }
    if (log_prices.size() < w0 + 1) {
        throw std::invalid_argument("need more than w0 = " + std::to_string(w0) + " prices");
    }
    std::vector<double> sigma(log_prices.size(), kNaN);
    for (std::size_t i = w0; i < log_prices.size(); ++i) {
        sigma[i] = sample_std(log_prices.subspan(i + 1 - w0, w0));
    }
    return sigma;
}

double largest_deviation(std::span<const double> cum_returns, std::size_t i0, std::size_t i,
                         TrendDirection direction) {
    if (i0 > i || i >= cum_returns.size()) {
        throw std::out_of_range("largest_deviation needs i0 <= i < length");
    }
    const auto range = cum_returns.subspan(i0, i - i0 + 1);
    if (direction == TrendDirection::up) {
        return *std::max_element(range.begin(), range.end()) - cum_returns[i];
    }
    return cum_returns[i] - *std::min_element(range.begin(), range.end());
}

std::vector<double> tolerance_series(std::span<const double> prices, const SegmentationConfig& cfg) {
    validate(cfg);
    if (cfg.tolerance_mode == ToleranceMode::constant) {
        return std::vector<double>(prices.size(), cfg.eps0);
    }
    std::vector<double> sigma;
    if (cfg.volatility_source == VolatilitySource::returns) {
        sigma = rolling_volatility(log_returns(prices), cfg.w0);
    } else {
        sigma = rolling_log_price_volatility(to_log(prices), cfg.w0);
    }
    for (double& s : sigma) s *= cfg.eps0;
    return sigma;
}

SegmentationResult segment(std::span<const double> prices, const SegmentationConfig& cfg) {
    validate(cfg);
    if (cfg.tolerance_mode == ToleranceMode::volatility && prices.size() <= cfg.w0 + 2) {
        throw std::invalid_argument("volatility segmentation needs more than w0 + 2 = " +
                                    std::to_string(cfg.w0 + 2) + " prices, got " +
                                    std::to_string(prices.size()));
    }
    if (prices.size() < 2) {
        throw std::invalid_argument("segmentation needs at least 2 prices");
    }
    const std::size_t start = first_start(cfg);
    if (start >= prices.size()) {
        throw std::invalid_argument("segmentation start index is past the end of the data");
    }
    if (cfg.tolerance_mode == ToleranceMode::volatility && start < cfg.w0) {
        throw std::invalid_argument("start index must be >= w0 so the volatility is defined");
    }

    const auto logs = to_log(prices);
    std::vector<double> cum(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) cum[i] = logs[i] - logs[0];
    const auto eps = tolerance_series(prices, cfg);

    SegmentationResult result;
    std::size_t i0 = start;
    TrendDirection direction = cfg.initial_direction;
    for (;;) {
        const bool up = direction == TrendDirection::up;
        double extreme = cum[i0];
        std::size_t extreme_index = i0;
        std::optional<std::size_t> crossing;
        for (std::size_t i = i0 + 1; i < cum.size(); ++i) {
            if (up ? cum[i] > extreme : cum[i] < extreme) {
                extreme = cum[i];
                extreme_index = i;
            }
            const double delta = up ? extreme - cum[i] : cum[i] - extreme;
            if (delta - eps[i] > 0.0) {
                crossing = i;
                break;
            }
        }
        if (!crossing) {
            result.open_trend = OpenTrend{direction, i0, extreme_index};
            break;
        }
        result.events.push_back({up ? EventKind::peak : EventKind::trough, extreme_index, *crossing, i0});
        i0 = extreme_index;
        direction = up ? TrendDirection::down : TrendDirection::up;
    }
    result.raw_segments = build_segments(result.events, start);
    return result;
}

std::vector<BubbleSegment> build_segments(const std::vector<TrendEvent>& events,
                                          std::size_t first_start) {
    std::vector<BubbleSegment> segments;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const auto& event = events[k];
        BubbleSegment seg;
        seg.end = event.extremum_index;
        seg.direction = event.kind == EventKind::peak ? TrendDirection::up : TrendDirection::down;
        if (k == 0) {
            seg.start = first_start;
            seg.warmup = true;
        } else {
            const std::size_t previous_crossing = events[k - 1].crossing_index;
            seg.start = previous_crossing < seg.end ? previous_crossing : event.trend_start;
        }
        if (seg.start < seg.end) {
            segments.push_back(seg);
        }
    }
    return segments;
}

std::vector<BubbleSegment> adjust_segments(std::vector<BubbleSegment> segments, const AdjustConfig& cfg) {
    for (const auto& cut : cfg.cuts) {
        auto it = std::find_if(segments.begin(), segments.end(),
                               [&](const BubbleSegment& s) { return s.end == cut.segment_end; });
        if (it == segments.end()) {
            throw std::invalid_argument("no segment ends at index " + std::to_string(cut.segment_end));
        }
        if (cut.cut_index < it->start || cut.cut_index >= it->end) {
            throw std::invalid_argument("cut point " + std::to_string(cut.cut_index) +
                                        " lies outside segment " + std::to_string(it->start) + "-" +
                                        std::to_string(it->end));
        }
        it->start = cut.cut_index;
    }
    std::erase_if(segments, [&](const BubbleSegment& s) {
        return (cfg.drop_warmup && s.warmup) || s.length() < cfg.min_segment_len;
    });
    return segments;
}

std::vector<ConsensusExtremum> consensus_segmentation(std::span<const double> prices,
                                                      const ConsensusGrid& grid,
                                                      const SegmentationConfig& base) {
    if (grid.eps0_samples == 0 || grid.w0_samples == 0 || grid.eps0_min > grid.eps0_max ||
        grid.w0_min > grid.w0_max) {
        throw std::invalid_argument("consensus grid ranges must be nonempty");
    }
    const auto sample = [](double lo, double hi, std::size_t n, std::size_t k) {
        return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    };
    std::vector<SegmentationConfig> cells;
    for (std::size_t a = 0; a < grid.eps0_samples; ++a) {
        for (std::size_t b = 0; b < grid.w0_samples; ++b) {
            SegmentationConfig cfg = base;
            cfg.eps0 = sample(grid.eps0_min, grid.eps0_max, grid.eps0_samples, a);
            cfg.w0 = static_cast<std::size_t>(std::llround(sample(static_cast<double>(grid.w0_min),
                                                                   static_cast<double>(grid.w0_max),
                                                                   grid.w0_samples, b)));
            cells.push_back(cfg);
        }
    }

    std::vector<std::vector<TrendEvent>> cell_events(cells.size());
    unsigned threads = grid.threads == 0 ? std::thread::hardware_concurrency() : grid.threads;
    threads = std::clamp<unsigned>(threads, 1U, static_cast<unsigned>(cells.size()));
    {
        std::vector<std::jthread> pool;
        std::vector<std::exception_ptr> failures(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t c = w; c < cells.size(); c += threads) {
                        cell_events[c] = segment(prices, cells[c]).events;
                    }
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        pool.clear();
        for (auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }
    }

    std::vector<ConsensusExtremum> ranked;
    for (EventKind kind : {EventKind::peak, EventKind::trough}) {
        std::map<std::size_t, std::size_t> histogram;
        for (const auto& events : cell_events) {
            for (const auto& e : events) {
                if (e.kind == kind) ++histogram[e.extremum_index];
            }
        }
        std::vector<std::pair<std::size_t, std::size_t>> by_count(histogram.begin(), histogram.end());
        std::stable_sort(by_count.begin(), by_count.end(),
                         [](const auto& x, const auto& y) { return x.second > y.second; });
        for (const auto& [index, count] : by_count) {
            if (!histogram.contains(index)) continue;
            std::size_t merged = 0;
            for (std::size_t j = index >= 2 ? index - 2 : 0; j <= index + 2; ++j) {
                if (auto it = histogram.find(j); it != histogram.end()) {
                    merged += it->second;
                    histogram.erase(it);
                }
            }
            ranked.push_back({kind, index, merged});
        }
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        return x.count != y.count ? x.count > y.count : x.index < y.index;
    });
    return ranked;
}

}  // namespace bubbletda
