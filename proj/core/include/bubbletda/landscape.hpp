/**
 * @file landscape.hpp
 * @brief Persistence landscapes in exact piecewise-linear form and their Lp norms.
 */
#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "bubbletda/persistence.hpp"

namespace bubbletda {

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

struct LandscapePoint {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const LandscapePoint&, const LandscapePoint&) = default;
};

/// One landscape level: critical points sorted by x, zero outside [front.x, back.x].
using LandscapeLevel = std::vector<LandscapePoint>;

struct PersistenceLandscape {
    std::vector<LandscapeLevel> levels;  ///< levels[0] is lambda(1), the pointwise maximum

    [[nodiscard]] bool empty() const { return levels.empty(); }
    /// lambda(k+1)(x); zero for k beyond the last level.
    [[nodiscard]] double evaluate(std::size_t k, double x) const;
};

/// Tent function of a birth-death pair. Throws std::invalid_argument unless b < d.
[[nodiscard]] double tent(double birth, double death, double x);

/// Exact landscape of the finite pairs; essential classes are ignored.
[[nodiscard]] PersistenceLandscape landscape_from_diagram(const PersistenceDiagram& diagram);

/// (sum_k ||lambda_k||_p^p)^(1/p) by exact integration of each linear piece, or the
/// maximum height when p is kInfinityNorm. Throws std::invalid_argument when p < 1.
[[nodiscard]] double landscape_norm(const PersistenceLandscape& landscape, double p);

/// 1/4 sum (d - b)^2 over finite pairs, with multiplicity.
[[nodiscard]] double l1_norm_closed_form(const PersistenceDiagram& diagram);
/// 1/2 max (d - b) over finite pairs; 0 when there are none.
[[nodiscard]] double linf_norm_closed_form(const PersistenceDiagram& diagram);

}  // namespace bubbletda
