#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bubbletda/embedding.hpp"

namespace testsupport {

/// Log-price rises 0..5 then falls back over each period of 10 samples.
inline std::vector<double> sawtooth_log_prices(std::size_t n = 30) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phase = static_cast<double>(i % 10);
        out[i] = phase <= 5.0 ? phase : 10.0 - phase;
    }
    return out;
}

inline std::vector<double> exp_all(const std::vector<double>& logs) {
    std::vector<double> out(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) out[i] = std::exp(logs[i]);
    return out;
}

/// Geometric random walk with Gaussian log-returns.
inline std::vector<double> random_walk_prices(std::size_t n, double step, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, step);
    std::vector<double> out(n);
    double log_price = std::log(100.0);
    for (auto& x : out) {
        x = std::exp(log_price);
        log_price += z(rng);
    }
    return out;
}

inline bubbletda::PointCloud random_cloud(std::size_t n, std::size_t dim, std::mt19937_64& rng,
                                          bool integer_grid = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> g(0, 3);
    bubbletda::PointCloud cloud(dim);
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& x : p) x = integer_grid ? g(rng) : u(rng);
        cloud.push_back(p);
    }
    return cloud;
}

}  // namespace testsupport
