#include "bubbletda/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace bubbletda {
namespace {

using Bar = std::pair<double, double>;

double level_value(const LandscapeLevel& level, double x) {
    if (level.empty() || x <= level.front().x || x >= level.back().x) {
        return 0.0;
    }
    const auto upper = std::upper_bound(level.begin(), level.end(), x,
                                        [](double v, const LandscapePoint& p) { return v < p.x; });
    const auto lower = upper - 1;
    if (upper->x == lower->x) {
        return std::max(lower->y, upper->y);
    }
    const double s = (x - lower->x) / (upper->x - lower->x);
    return lower->y + s * (upper->y - lower->y);
}

// Integral of y^p over the segment between two critical points.
double segment_integral(const LandscapePoint& u, const LandscapePoint& v, double p) {
    const double dx = v.x - u.x;
    if (dx <= 0.0) {
        return 0.0;
    }
    if (p == 1.0) {
        return 0.5 * dx * (u.y + v.y);
    }
    const double dy = v.y - u.y;
    if (std::abs(dy) <= 1e-12 * std::max(std::abs(u.y), std::abs(v.y))) {
        return dx * std::pow(0.5 * (u.y + v.y), p);
    }
    return dx * (std::pow(v.y, p + 1.0) - std::pow(u.y, p + 1.0)) / ((p + 1.0) * dy);
}

}  // namespace

double tent(double birth, double death, double x) {
    if (!(birth < death)) {
        throw std::invalid_argument("tent function needs birth < death");
    }
    const double mid = 0.5 * (birth + death);
    if (x > birth && x <= mid) return x - birth;
    if (x > mid && x < death) return death - x;
    return 0.0;
}

double PersistenceLandscape::evaluate(std::size_t k, double x) const {
    return k < levels.size() ? level_value(levels[k], x) : 0.0;
}

PersistenceLandscape landscape_from_diagram(const PersistenceDiagram& diagram) {
    // Bars sorted by birth ascending, death descending.
    std::vector<Bar> bars;
    for (const auto& p : diagram.pairs) {
        if (!(p.birth < p.death) || !std::isfinite(p.death)) {
            continue;
        }
        bars.insert(bars.end(), p.multiplicity, Bar{p.birth, p.death});
    }
    const auto order = [](const Bar& x, const Bar& y) {
        return x.first != y.first ? x.first < y.first : x.second > y.second;
    };
    std::sort(bars.begin(), bars.end(), order);

    PersistenceLandscape landscape;
    while (!bars.empty()) {
        LandscapeLevel level;
        auto [b, d] = bars.front();
        bars.erase(bars.begin());
        std::size_t pos = 0;
        level.push_back({b, 0.0});
        level.push_back({0.5 * (b + d), 0.5 * (d - b)});

        for (;;) {
            auto next = std::find_if(bars.begin() + static_cast<std::ptrdiff_t>(pos), bars.end(),
                                     [d = d](const Bar& bar) { return bar.second > d; });
            if (next == bars.end()) {
                level.push_back({d, 0.0});
                break;
            }
            const auto [b2, d2] = *next;
            pos = static_cast<std::size_t>(next - bars.begin());
            bars.erase(next);

            if (b2 > d) {
                level.push_back({d, 0.0});
            }
            if (b2 >= d) {
                level.push_back({b2, 0.0});
            } else {
                // The two tents cross; the dominated remainder (b2, d) drops to the next level.
                level.push_back({0.5 * (b2 + d), 0.5 * (d - b2)});
                const Bar remainder{b2, d};
                const auto at = std::lower_bound(bars.begin() + static_cast<std::ptrdiff_t>(pos),
                                                 bars.end(), remainder, order);
                bars.insert(at, remainder);
            }
            level.push_back({0.5 * (b2 + d2), 0.5 * (d2 - b2)});
            b = b2;
            d = d2;
        }
        landscape.levels.push_back(std::move(level));
    }
    return landscape;
}

double landscape_norm(const PersistenceLandscape& landscape, double p) {
    if (std::isnan(p) || p < 1.0) {
        throw std::invalid_argument("landscape norm order must be >= 1, got " + std::to_string(p));
    }
    if (std::isinf(p)) {
        double height = 0.0;
        for (const auto& level : landscape.levels) {
            for (const auto& pt : level) {
                height = std::max(height, pt.y);
            }
        }
        return height;
    }
    double total = 0.0;
    for (const auto& level : landscape.levels) {
        for (std::size_t i = 1; i < level.size(); ++i) {
            total += segment_integral(level[i - 1], level[i], p);
        }
    }
    return p == 1.0 ? total : std::pow(total, 1.0 / p);
}

double l1_norm_closed_form(const PersistenceDiagram& diagram) {
    double total = 0.0;
    for (const auto& pair : diagram.pairs) {
        const double len = pair.persistence();
        total += static_cast<double>(pair.multiplicity) * len * len;
    }
    return 0.25 * total;
}

double linf_norm_closed_form(const PersistenceDiagram& diagram) {
    double longest = 0.0;
    for (const auto& pair : diagram.pairs) {
        longest = std::max(longest, pair.persistence());
    }
    return 0.5 * longest;
}

}  // namespace bubbletda
