#include "bubbletda/tda_pipeline.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "bubbletda/landscape.hpp"

namespace bubbletda {

double window_norm(const PointCloud& cloud, const TdaConfig& cfg) {
    const RipsDiagrams diagrams = rips_persistence(pairwise_distances(cloud), cfg.rips);
    return landscape_norm(landscape_from_diagram(diagrams.h1), cfg.p);
}

SignalSeries norms_over_windows(std::span<const double> series, const TdaConfig& cfg) {
    validate(cfg.embedding);
    if (cfg.p < 1.0) {
        throw std::invalid_argument("norm order p must be >= 1");
    }
    const std::size_t needed = min_series_length(cfg.embedding);
    if (series.size() < needed) {
        throw std::invalid_argument("series of length " + std::to_string(series.size()) +
                                    " is too short for one window; need L >= (N-1)d + w = " +
                                    std::to_string(needed));
    }

    const PointCloud points = delay_embed(series, cfg.embedding.dim, cfg.embedding.delay);
    const std::size_t count = window_count(series.size(), cfg.embedding);
    const std::size_t span = (cfg.embedding.dim - 1) * cfg.embedding.delay;

    SignalSeries signal;
    signal.values.assign(count, 0.0);
    signal.window_start.resize(count);
    signal.window_end.resize(count);
    for (std::size_t t = 0; t < count; ++t) {
        signal.window_start[t] = t;
        signal.window_end[t] = t + cfg.embedding.window - 1 + span;
    }

    unsigned threads = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
    threads = std::clamp<unsigned>(threads, 1U, static_cast<unsigned>(count));

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](unsigned worker) {
        try {
            for (std::size_t t = worker; t < count; t += threads) {
                signal.values[t] = window_norm(window_at(points, t, cfg.embedding.window), cfg);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back(work, w);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return signal;
}

PeakReport peak_report(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("peak report of an empty signal");
    }
    const auto it = std::max_element(values.begin(), values.end());
    PeakReport report;
    report.index = static_cast<std::size_t>(it - values.begin());
    report.value = *it;
    report.position = values.size() == 1
                          ? 0.0
                          : static_cast<double>(report.index) / static_cast<double>(values.size() - 1);
    return report;
}

PeakReport peak_report(const SignalSeries& signal) { return peak_report(signal.values); }

}  // namespace bubbletda
