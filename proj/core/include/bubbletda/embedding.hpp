/**
 * @file embedding.hpp
 * @brief Time-delay coordinate embedding and sliding windows of point clouds.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bubbletda {

/// Ordered set of equal-dimension points stored row-major.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::size_t dim);
    PointCloud(std::size_t dim, std::vector<double> coords);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    [[nodiscard]] bool empty() const { return coords_.empty(); }

    [[nodiscard]] std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    [[nodiscard]] std::span<double> point(std::size_t i) {
        return {coords_.data() + i * dim_, dim_};
    }
    [[nodiscard]] const std::vector<double>& coords() const { return coords_; }

    /// Throws std::invalid_argument when p.size() != dim().
    void push_back(std::span<const double> p);

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

struct EmbeddingConfig {
    std::size_t dim = 4;     ///< N
    std::size_t delay = 5;   ///< d, samples
    std::size_t window = 72; ///< w, points per cloud
};

/// Minimum series length (N-1)d + w giving one window.
[[nodiscard]] std::size_t min_series_length(const EmbeddingConfig& cfg);

/// K = L - (N-1)d - (w-1), or 0 when the series is too short.
[[nodiscard]] std::size_t window_count(std::size_t series_length, const EmbeddingConfig& cfg);

/// Throws std::invalid_argument unless N >= 2, d >= 1, w >= 2.
void validate(const EmbeddingConfig& cfg);

/**
 * Delay vectors z_t = (x_t, x_{t+d}, ..., x_{t+(N-1)d}) for t = 0..L-1-(N-1)d.
 *
 * Throws std::invalid_argument when the series is shorter than 1 + (N-1)d, when
 * N < 1 or d < 1, or when a value is not finite.
 */
[[nodiscard]] PointCloud delay_embed(std::span<const double> series, std::size_t dim,
                                     std::size_t delay);

/// Windows {z_t, ..., z_{t+w-1}} for every start t. Throws when fewer than w points.
[[nodiscard]] std::vector<PointCloud> sliding_windows(const PointCloud& points, std::size_t window);

/// A single window, without materialising the others.
[[nodiscard]] PointCloud window_at(const PointCloud& points, std::size_t start, std::size_t window);

}  // namespace bubbletda
