#include "bubbletda/lppls_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bubbletda {
namespace {

constexpr double kRankThreshold = 1e-10;

const char* column_name(std::size_t k) {
    static constexpr const char* names[] = {"constant", "power", "cosine", "sine"};
    return k < 4 ? names[k] : "?";
}

}  // namespace

FitBounds FitBounds::defaults(std::size_t n) {
    FitBounds b;
    const double last = static_cast<double>(n) - 1.0;
    b.tc = {last + 1e-3, last + 0.5 * static_cast<double>(n)};
    return b;
}

void FitBounds::validate(double last_index) const {
    for (const Interval* iv : {&tc, &m, &omega}) {
        if (!(iv->lo <= iv->hi) || !std::isfinite(iv->lo) || !std::isfinite(iv->hi)) {
            throw std::invalid_argument("fit bounds must be finite nonempty intervals");
        }
    }
    if (!(m.lo > 0.0 && m.hi < 1.0)) {
        throw std::invalid_argument("m bounds must lie inside (0, 1)");
    }
    if (!(omega.lo > 0.0)) {
        throw std::invalid_argument("omega bounds must be positive");
    }
    if (!(tc.lo > last_index)) {
        throw std::invalid_argument("tc lower bound must exceed the last sample index " +
                                    std::to_string(last_index));
    }
}

Box FitBounds::box() const { return Box{{tc.lo, m.lo, omega.lo}, {tc.hi, m.hi, omega.hi}}; }

RankDeficientError::RankDeficientError(std::size_t first, std::size_t second)
    : std::runtime_error(std::string("design matrix is rank deficient: ") + column_name(first) +
                         " column " + std::to_string(first) + " and " + column_name(second) +
                         " column " + std::to_string(second) + " are numerically dependent"),
      first_(first),
      second_(second) {}

Eigen::MatrixXd design_matrix(std::span<const double> times, double tc, double m, double omega) {
    if (times.empty()) {
        throw std::invalid_argument("design matrix needs at least one time");
    }
    const double latest = *std::max_element(times.begin(), times.end());
    if (!(tc > latest)) {
        throw std::domain_error("tc = " + std::to_string(tc) + " must exceed the last time " +
                                std::to_string(latest));
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(times.size()), 4);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double dt = tc - times[i];
        const double power = std::pow(dt, m);
        const double phase = omega * std::log(dt);
        const auto r = static_cast<Eigen::Index>(i);
        X(r, 0) = 1.0;
        X(r, 1) = power;
        X(r, 2) = power * std::cos(phase);
        X(r, 3) = power * std::sin(phase);
    }
    return X;
}

LinearFit linear_subfit(std::span<const double> y, std::span<const double> times, double tc, double m,
                        double omega) {
    if (y.size() != times.size()) {
        throw std::invalid_argument("observations and times differ in length");
    }
    if (y.size() < 4) {
        throw std::invalid_argument("linear subfit needs at least 4 samples");
    }
    const Eigen::MatrixXd X = design_matrix(times, tc, m, omega);
    const Eigen::Map<const Eigen::VectorXd> target(y.data(), static_cast<Eigen::Index>(y.size()));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < 4) {
        // Name the most collinear pair of columns.
        std::size_t first = 0, second = 1;
        double worst = -1.0;
        for (Eigen::Index i = 0; i < 4; ++i) {
            for (Eigen::Index j = i + 1; j < 4; ++j) {
                const double ni = X.col(i).norm(), nj = X.col(j).norm();
                const double cosine = (ni == 0.0 || nj == 0.0) ? 1.0 : std::abs(X.col(i).dot(X.col(j))) / (ni * nj);
                if (cosine > worst) {
                    worst = cosine;
                    first = static_cast<std::size_t>(i);
                    second = static_cast<std::size_t>(j);
                }
            }
        }
        throw RankDeficientError(first, second);
    }
    const Eigen::Vector4d q = qr.solve(target);
    LinearFit fit{q(0), q(1), q(2), q(3), (X * q - target).squaredNorm()};
    return fit;
}

double objective(std::span<const double> p, std::span<const double> y, std::span<const double> times) {
    try {
        const double rss = linear_subfit(y, times, p[0], p[1], p[2]).rss;
        return std::isfinite(rss) ? rss : std::numeric_limits<double>::infinity();
    } catch (const std::exception&) {
        return std::numeric_limits<double>::infinity();
    }
}

double FitResult::mean_abs_residual() const {
    if (residuals.empty()) return 0.0;
    double total = 0.0;
    for (double r : residuals) total += std::abs(r);
    return total / static_cast<double>(residuals.size());
}

FitResult fit_segment(std::span<const double> series, const FitBounds& bounds, const DeConfig& cfg) {
    if (series.size() < 20) {
        throw std::invalid_argument("LPPLS fit needs a segment of at least 20 samples, got " +
                                    std::to_string(series.size()));
    }
    for (double v : series) {
        if (!std::isfinite(v)) throw std::invalid_argument("segment contains a non-finite value");
    }
    std::vector<double> times(series.size());
    std::iota(times.begin(), times.end(), 0.0);
    bounds.validate(times.back());

    FitResult result;
    result.search = differential_evolution(
        [&](std::span<const double> p) { return objective(p, series, times); }, bounds.box(), cfg);
    const auto& p = result.search.best;
    const LinearFit linear = linear_subfit(series, times, p[0], p[1], p[2]);

    result.params = {p[0], p[1], p[2], linear.A, linear.B, linear.C1, linear.C2};
    result.converged = result.search.converged;
    result.fitted.resize(series.size());
    result.residuals.resize(series.size());
    result.rss = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        result.fitted[i] = lppls_log_price(result.params, times[i]);
        result.residuals[i] = series[i] - result.fitted[i];
        result.rss += result.residuals[i] * result.residuals[i];
    }
    return result;
}

}  // namespace bubbletda
