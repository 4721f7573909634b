#include "bubbletda/lppls.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bubbletda {

double LpplsParams::amplitude() const { return std::hypot(C1, C2); }

void validate(const LpplsParams& params) {
    for (double v : {params.tc, params.m, params.omega, params.A, params.B, params.C1, params.C2}) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("LPPLS parameters must be finite");
        }
    }
    if (!(params.m > 0.0 && params.m < 1.0)) {
        throw std::invalid_argument("LPPLS exponent m must lie in (0, 1), got " +
                                    std::to_string(params.m));
    }
    if (!(params.omega > 0.0)) {
        throw std::invalid_argument("LPPLS log-frequency omega must be positive, got " +
                                    std::to_string(params.omega));
    }
}

const char* to_string(BubbleDirection direction) {
    return direction == BubbleDirection::positive ? "positive" : "negative";
}

double lppls_log_price(const LpplsParams& params, double t) {
    validate(params);
    if (t > params.tc) {
        throw std::domain_error("LPPLS expectation is undefined past the critical time (t = " +
                                std::to_string(t) + " > tc = " + std::to_string(params.tc) + ")");
    }
    if (t == params.tc) {
        return params.A;
    }
    const double dt = params.tc - t;
    const double power = std::pow(dt, params.m);
    const double phase = params.omega * std::log(dt);
    return params.A + params.B * power + params.C1 * power * std::cos(phase) +
           params.C2 * power * std::sin(phase);
}

std::vector<double> generate_synthetic(const LpplsParams& params, const SyntheticConfig& cfg) {
    validate(params);
    if (cfg.n_points < 2) {
        throw std::invalid_argument("synthetic series needs at least 2 points");
    }
    if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) {
        throw std::invalid_argument("noise sigma must be finite and non-negative");
    }
    if (static_cast<double>(cfg.n_points - 1) > params.tc) {
        throw std::domain_error("synthetic series of " + std::to_string(cfg.n_points) +
                                " points would run past tc = " + std::to_string(params.tc));
    }

    std::vector<double> series(cfg.n_points);
    GaussianStream noise(cfg.seed);
    for (std::size_t t = 0; t < cfg.n_points; ++t) {
        series[t] = lppls_log_price(params, static_cast<double>(t));
        if (cfg.sigma > 0.0) {
            series[t] += cfg.sigma * noise.next();
        }
    }
    return series;
}

BubbleDirection classify_bubble(const LpplsParams& params) {
    if (params.B == 0.0) {
        throw std::domain_error("bubble direction is indeterminate for B = 0");
    }
    return params.B < 0.0 ? BubbleDirection::positive : BubbleDirection::negative;
}

GaussianStream::GaussianStream(std::uint64_t seed) : engine_(seed) {}

double GaussianStream::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace bubbletda
