#include "bubbletda/embedding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bubbletda {

PointCloud::PointCloud(std::size_t dim) : dim_(dim) {
    if (dim == 0) {
        throw std::invalid_argument("point cloud dimension must be positive");
    }
}

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
    if (dim == 0) {
        throw std::invalid_argument("point cloud dimension must be positive");
    }
    if (coords_.size() % dim != 0) {
        throw std::invalid_argument("coordinate count " + std::to_string(coords_.size()) +
                                    " is not a multiple of dimension " + std::to_string(dim));
    }
}

void PointCloud::push_back(std::span<const double> p) {
    if (p.size() != dim_) {
        throw std::invalid_argument("point of dimension " + std::to_string(p.size()) +
                                    " pushed into cloud of dimension " + std::to_string(dim_));
    }
    coords_.insert(coords_.end(), p.begin(), p.end());
}

std::size_t min_series_length(const EmbeddingConfig& cfg) {
    return (cfg.dim - 1) * cfg.delay + cfg.window;
}

std::size_t window_count(std::size_t series_length, const EmbeddingConfig& cfg) {
    const std::size_t needed = min_series_length(cfg);
    return series_length < needed ? 0 : series_length - needed + 1;
}

void validate(const EmbeddingConfig& cfg) {
    if (cfg.dim < 2) {
        throw std::invalid_argument("embedding dimension must be at least 2");
    }
    if (cfg.delay < 1) {
        throw std::invalid_argument("embedding delay must be at least 1");
    }
    if (cfg.window < 2) {
        throw std::invalid_argument("window size must be at least 2");
    }
}

PointCloud delay_embed(std::span<const double> series, std::size_t dim, std::size_t delay) {
    if (dim < 1 || delay < 1) {
        throw std::invalid_argument("delay embedding needs dim >= 1 and delay >= 1");
    }
    const std::size_t span = (dim - 1) * delay;
    if (series.size() < span + 1) {
        throw std::invalid_argument("series of length " + std::to_string(series.size()) +
                                    " is too short for delay embedding; need at least " +
                                    std::to_string(span + 1));
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!std::isfinite(series[i])) {
            throw std::invalid_argument("series value at index " + std::to_string(i) +
                                        " is not finite");
        }
    }

    const std::size_t count = series.size() - span;
    std::vector<double> coords(count * dim);
    for (std::size_t t = 0; t < count; ++t) {
        for (std::size_t i = 0; i < dim; ++i) {
            coords[t * dim + i] = series[t + i * delay];
        }
    }
    return PointCloud(dim, std::move(coords));
}

PointCloud window_at(const PointCloud& points, std::size_t start, std::size_t window) {
    if (window == 0 || start + window > points.size()) {
        throw std::out_of_range("window [" + std::to_string(start) + ", " +
                                std::to_string(start + window) + ") exceeds " +
                                std::to_string(points.size()) + " points");
    }
    const auto first = points.coords().begin() + static_cast<std::ptrdiff_t>(start * points.dim());
    return PointCloud(points.dim(),
                      std::vector<double>(first, first + static_cast<std::ptrdiff_t>(window * points.dim())));
}

std::vector<PointCloud> sliding_windows(const PointCloud& points, std::size_t window) {
    if (window == 0) {
        throw std::invalid_argument("window size must be positive");
    }
    if (points.size() < window) {
        throw std::invalid_argument("cannot form a window of " + std::to_string(window) +
                                    " from " + std::to_string(points.size()) + " points");
    }
    const std::size_t count = points.size() - window + 1;
    std::vector<PointCloud> windows;
    windows.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        windows.push_back(window_at(points, t, window));
    }
    return windows;
}

}  // namespace bubbletda
