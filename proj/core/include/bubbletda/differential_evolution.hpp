/**
 * @file differential_evolution.hpp
 * @brief Box-constrained DE/rand/1/bin global minimiser with optional Nelder-Mead polish.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace bubbletda {

/// Axis-aligned search box.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    [[nodiscard]] std::size_t dim() const { return lower.size(); }
    /// Throws std::invalid_argument on mismatched sizes or an empty / inverted interval.
    void validate() const;
    [[nodiscard]] bool contains(std::span<const double> x) const;
};

struct DeConfig {
    std::size_t population_size = 30;
    std::size_t max_generations = 500;
    double differential_weight = 0.8;  ///< F
    double crossover_rate = 0.9;       ///< CR
    std::uint64_t seed = 0;
    bool local_polish = true;
    /// Stop early once max - min of the population objective falls below
    /// tolerance * |best| + absolute_tolerance, or once every coordinate of the
    /// population spans less than x_tolerance of its box width.
    double tolerance = 1e-12;
    double absolute_tolerance = 0.0;
    double x_tolerance = 1e-10;

    void validate() const;
};

struct DeResult {
    std::vector<double> best;
    double best_value = 0.0;
    /// Best-so-far objective after initialisation (entry 0) and after each generation.
    std::vector<double> trace;
    std::size_t generations = 0;
    std::size_t evaluations = 0;
    bool converged = false;  ///< population collapsed before max_generations
    bool polished = false;   ///< local polish improved the DE optimum
};

using Objective = std::function<double(std::span<const double>)>;

/// Reflects x into [lo, hi] as often as needed.
[[nodiscard]] double reflect_into(double x, double lo, double hi);

/**
 * Minimises `objective` over `box`.
 *
 * Each target i gets a mutant a + F (b - c) from three distinct members other than i,
 * binomial crossover with rate CR and one forced coordinate, reflection into the box
 * and greedy one-to-one selection. Non-finite objective values count as +infinity.
 * Deterministic for a fixed seed.
 */
[[nodiscard]] DeResult differential_evolution(const Objective& objective, const Box& box,
                                              const DeConfig& cfg);

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Derivative-free simplex descent started at x0, with candidates projected onto the box.
[[nodiscard]] NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                                           const Box& box, std::size_t max_evaluations = 4000);

}  // namespace bubbletda
