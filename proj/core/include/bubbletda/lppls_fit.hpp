/**
 * @file lppls_fit.hpp
 * @brief LPPLS calibration: global search over (tc, m, omega) with the four linear
 * parameters (A, B, C1, C2) solved exactly by least squares at every candidate.
 */
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bubbletda/differential_evolution.hpp"
#include "bubbletda/lppls.hpp"

namespace bubbletda {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Search box for the nonlinear LPPLS parameters. Times are segment-relative indices.
struct FitBounds {
    Interval tc;
    Interval m{0.01, 0.99};
    Interval omega{2.0, 25.0};

    /// tc in (n-1, n-1 + n/2], m in [0.01, 0.99], omega in [2, 25].
    [[nodiscard]] static FitBounds defaults(std::size_t n);
    /// Throws std::invalid_argument on empty intervals, m outside (0, 1), or tc.lo <= last_index.
    void validate(double last_index) const;
    [[nodiscard]] Box box() const;
};

/// Raised by linear_subfit when two design columns are numerically dependent.
class RankDeficientError : public std::runtime_error {
public:
    RankDeficientError(std::size_t first, std::size_t second);
    [[nodiscard]] std::size_t first_column() const { return first_; }
    [[nodiscard]] std::size_t second_column() const { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

/// Rows [1, (tc-t)^m, (tc-t)^m cos(omega ln(tc-t)), (tc-t)^m sin(omega ln(tc-t))].
/// Throws std::domain_error when tc <= max(times).
[[nodiscard]] Eigen::MatrixXd design_matrix(std::span<const double> times, double tc, double m,
                                            double omega);

struct LinearFit {
    double A = 0.0;
    double B = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double rss = 0.0;
};

/// Least-squares (A, B, C1, C2) by column-pivoted Householder QR.
[[nodiscard]] LinearFit linear_subfit(std::span<const double> y, std::span<const double> times,
                                      double tc, double m, double omega);

/// Residual sum of squares after the linear subfit at p = (tc, m, omega); +infinity if
/// the subfit fails.
[[nodiscard]] double objective(std::span<const double> p, std::span<const double> y,
                               std::span<const double> times);

struct FitResult {
    LpplsParams params;
    double rss = 0.0;
    std::vector<double> fitted;
    std::vector<double> residuals;  ///< y - fitted
    bool converged = false;
    DeResult search;

    [[nodiscard]] double mean_abs_residual() const;
};

/// Fits a segment sampled at t = 0..n-1. Requires n >= 20.
[[nodiscard]] FitResult fit_segment(std::span<const double> series, const FitBounds& bounds,
                                    const DeConfig& cfg);

}  // namespace bubbletda
