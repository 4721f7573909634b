#include "bubbletda/differential_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bubbletda {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Explicit mappings so the stream does not depend on the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t below(std::size_t n) {
        // Lemire's multiply-shift with rejection.
        std::uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = -static_cast<std::uint64_t>(n) % n;
            while (low < threshold) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

private:
    std::mt19937_64 engine_;
};

double safe_eval(const Objective& objective, std::span<const double> x) {
    const double value = objective(x);
    return std::isnan(value) ? kInf : value;
}

}  // namespace

void Box::validate() const {
    if (lower.size() != upper.size() || lower.empty()) {
        throw std::invalid_argument("search box bounds must be nonempty and of equal size");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(lower[i] <= upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
            throw std::invalid_argument("search box interval " + std::to_string(i) + " is invalid");
        }
    }
}

bool Box::contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
}

void DeConfig::validate() const {
    if (population_size < 4) {
        throw std::invalid_argument("DE population size must be at least 4");
    }
    if (!(differential_weight > 0.0 && differential_weight <= 2.0)) {
        throw std::invalid_argument("DE differential weight F must lie in (0, 2]");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw std::invalid_argument("DE crossover rate CR must lie in [0, 1]");
    }
}

double reflect_into(double x, double lo, double hi) {
    if (x >= lo && x <= hi) return x;
    const double width = hi - lo;
    if (width <= 0.0) return lo;
    double y = std::fmod(x - lo, 2.0 * width);
    if (y < 0.0) y += 2.0 * width;
    return y <= width ? lo + y : lo + 2.0 * width - y;
}

DeResult differential_evolution(const Objective& objective, const Box& box, const DeConfig& cfg) {
    box.validate();
    cfg.validate();
    const std::size_t dim = box.dim();
    const std::size_t np = cfg.population_size;
    Rng rng(cfg.seed);

    std::vector<std::vector<double>> population(np, std::vector<double>(dim));
    std::vector<double> fitness(np);
    DeResult result;
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            population[i][k] = box.lower[k] + rng.uniform() * (box.upper[k] - box.lower[k]);
        }
        fitness[i] = safe_eval(objective, population[i]);
    }
    result.evaluations = np;

    auto best_of = [&] {
        return static_cast<std::size_t>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
    };
    std::size_t best = best_of();
    result.trace.push_back(fitness[best]);

    std::vector<std::vector<double>> trials(np, std::vector<double>(dim));
    for (std::size_t gen = 0; gen < cfg.max_generations; ++gen) {
        // Trial vectors are built from the current generation only, so evaluation order is free.
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t a, b, c;
            do { a = rng.below(np); } while (a == i);
            do { b = rng.below(np); } while (b == i || b == a);
            do { c = rng.below(np); } while (c == i || c == a || c == b);
            const std::size_t forced = rng.below(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                if (k == forced || rng.uniform() < cfg.crossover_rate) {
                    const double mutant = population[a][k] +
                                          cfg.differential_weight * (population[b][k] - population[c][k]);
                    trials[i][k] = reflect_into(mutant, box.lower[k], box.upper[k]);
                } else {
                    trials[i][k] = population[i][k];
                }
            }
        }
        for (std::size_t i = 0; i < np; ++i) {
            const double value = safe_eval(objective, trials[i]);
            if (value <= fitness[i]) {
                population[i].swap(trials[i]);
                fitness[i] = value;
            }
        }
        result.evaluations += np;
        result.generations = gen + 1;
        best = best_of();
        result.trace.push_back(fitness[best]);

        const auto [lo, hi] = std::minmax_element(fitness.begin(), fitness.end());
        bool collapsed = true;
        for (std::size_t k = 0; k < dim && collapsed; ++k) {
            double min_k = population[0][k], max_k = population[0][k];
            for (const auto& member : population) {
                min_k = std::min(min_k, member[k]);
                max_k = std::max(max_k, member[k]);
            }
            collapsed = max_k - min_k <= cfg.x_tolerance * (box.upper[k] - box.lower[k]);
        }
        if (collapsed ||
            (std::isfinite(*hi) && *hi - *lo <= cfg.tolerance * std::abs(*lo) + cfg.absolute_tolerance)) {
            result.converged = true;
            break;
        }
    }

    result.best = population[best];
    result.best_value = fitness[best];
    if (cfg.local_polish) {
        const auto polished = nelder_mead(objective, result.best, box);
        result.evaluations += polished.evaluations;
        if (polished.value < result.best_value) {
            result.best = polished.x;
            result.best_value = polished.value;
            result.polished = true;
        }
    }
    return result;
}

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0, const Box& box,
                             std::size_t max_evaluations) {
    box.validate();
    const std::size_t n = box.dim();
    if (x0.size() != n) {
        throw std::invalid_argument("Nelder-Mead start point has the wrong dimension");
    }
    auto project = [&](std::vector<double>& x) {
        for (std::size_t k = 0; k < n; ++k) x[k] = std::clamp(x[k], box.lower[k], box.upper[k]);
    };
    project(x0);

    NelderMeadResult out;
    auto eval = [&](const std::vector<double>& x) {
        ++out.evaluations;
        return safe_eval(objective, x);
    };

    std::vector<std::vector<double>> simplex{x0};
    for (std::size_t k = 0; k < n; ++k) {
        auto v = x0;
        const double width = box.upper[k] - box.lower[k];
        const double step = width > 0.0 ? 0.01 * width : 0.0;
        v[k] = x0[k] + step <= box.upper[k] ? x0[k] + step : x0[k] - step;
        simplex.push_back(v);
    }
    std::vector<double> values;
    for (const auto& v : simplex) values.push_back(eval(v));

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), candidate(n), expanded(n);
    while (out.evaluations < max_evaluations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return values[i] < values[j]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

        double size = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                const double width = box.upper[k] - box.lower[k];
                if (width > 0.0) size = std::max(size, std::abs(simplex[i][k] - simplex[best][k]) / width);
            }
        }
        if (size < 1e-14 || values[worst] - values[best] <= 1e-15 * std::abs(values[best])) {
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
        }
        auto along = [&](double t, std::vector<double>& out_point) {
            for (std::size_t k = 0; k < n; ++k) {
                out_point[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
            }
            project(out_point);
        };

        along(-1.0, candidate);
        const double reflected = eval(candidate);
        if (reflected < values[best]) {
            along(-2.0, expanded);
            const double value = eval(expanded);
            if (value < reflected) {
                simplex[worst] = expanded;
                values[worst] = value;
            } else {
                simplex[worst] = candidate;
                values[worst] = reflected;
            }
            continue;
        }
        if (reflected < values[second]) {
            simplex[worst] = candidate;
            values[worst] = reflected;
            continue;
        }
        const bool outside = reflected < values[worst];
        along(outside ? -0.5 : 0.5, expanded);
        const double contracted = eval(expanded);
        if (contracted < (outside ? reflected : values[worst])) {
            simplex[worst] = expanded;
            values[worst] = contracted;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < n; ++k) {
                simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
            }
            values[i] = eval(simplex[i]);
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    out.x = simplex[best];
    out.value = values[best];
    return out;
}

}  // namespace bubbletda
