/**
 * @file lppls.hpp
 * @brief Log-periodic power law singularity (LPPLS) expectation and synthetic series.
 *
 * The expected log-price is
 *
 *   E[ln p(t)] = A + B (tc - t)^m + C1 (tc - t)^m cos(omega ln(tc - t))
 *                                 + C2 (tc - t)^m sin(omega ln(tc - t))
 *
 * for t <= tc, extended by continuity with the value A at t = tc. Time is measured
 * in sample indices.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace bubbletda {

struct LpplsParams {
    double tc = 0.0;     ///< critical time, sample-index units
    double m = 0.5;      ///< power-law exponent, 0 < m < 1
    double omega = 6.0;  ///< log-frequency, > 0
    double A = 0.0;      ///< log-price at tc
    double B = 0.0;      ///< trend amplitude; B < 0 is a positive bubble
    double C1 = 0.0;
    double C2 = 0.0;

    /// Oscillation amplitude sqrt(C1^2 + C2^2).
    [[nodiscard]] double amplitude() const;
};

/// Throws std::invalid_argument unless 0 < m < 1, omega > 0 and all fields are finite.
void validate(const LpplsParams& params);

struct SyntheticConfig {
    std::size_t n_points = 2;
    double sigma = 0.0;  ///< Gaussian noise std, log-price units
    std::uint64_t seed = 0;
};

enum class BubbleDirection { positive, negative };

const char* to_string(BubbleDirection direction);

/// Expected log-price at time t. Throws std::domain_error when t > tc.
[[nodiscard]] double lppls_log_price(const LpplsParams& params, double t);

/// Log-prices at t = 0, 1, ..., n_points - 1 plus sigma * g_t with g_t standard Gaussian
/// drawn from GaussianStream(seed). Throws std::domain_error when n_points - 1 > tc.
[[nodiscard]] std::vector<double> generate_synthetic(const LpplsParams& params,
                                                     const SyntheticConfig& cfg);

/// Sign rule on B. Throws std::domain_error when B == 0.
[[nodiscard]] BubbleDirection classify_bubble(const LpplsParams& params);

/**
 * Reproducible standard normal stream.
 *
 * Uniforms come from std::mt19937_64 (whose output sequence is fixed by the C++
 * standard) mapped to (0, 1) as ((x >> 11) + 0.5) * 2^-53. Normals come from the
 * basic Box-Muller transform, consuming two uniforms per pair and returning the
 * cosine branch first. Unlike std::normal_distribution the output is identical
 * across standard library implementations.
 */
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed);

    double next();

private:
    double uniform();

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bubbletda
