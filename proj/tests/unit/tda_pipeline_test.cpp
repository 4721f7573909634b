#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bubbletda/lppls.hpp"
#include "bubbletda/landscape.hpp"
#include "bubbletda/tda_pipeline.hpp"

using namespace bubbletda;

namespace {

TdaConfig small_config(unsigned threads = 1) {
    TdaConfig cfg;
    cfg.embedding = {3, 2, 24};
    cfg.threads = threads;
    return cfg;
}

std::vector<double> lppls_series(double sign) {
    LpplsParams p{200.0, 0.3, 6.7, 11.0, sign * -3e-4, sign * 4.4e-5, sign * -3.4e-5};
    return generate_synthetic(p, {200, 0.0, 0});
}

}  // namespace

TEST(NormsOverWindows, ConstantSeriesGivesZeros) {
    const std::vector<double> series(80, 2.5);
    const auto signal = norms_over_windows(series, small_config());
    ASSERT_EQ(signal.size(), 80u - 4u - 23u);
    for (double v : signal.values) EXPECT_EQ(v, 0.0);
}

TEST(NormsOverWindows, WindowIndicesCoverTheSeries) {
    const std::vector<double> series(60, 1.0);
    const auto signal = norms_over_windows(series, small_config());
    ASSERT_EQ(signal.window_start.size(), signal.size());
    ASSERT_EQ(signal.window_end.size(), signal.size());
    for (std::size_t t = 0; t < signal.size(); ++t) {
        EXPECT_EQ(signal.window_start[t], t);
        EXPECT_EQ(signal.window_end[t], t + 23 + 4);
    }
    EXPECT_EQ(signal.window_end.back(), 59u);
}

TEST(NormsOverWindows, ShortSeriesNamesRequiredLength) {
    const std::vector<double> series(27, 1.0);
    try {
        (void)norms_over_windows(series, small_config());
        FAIL() << "expected an exception";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("28"), std::string::npos) << e.what();
    }
    EXPECT_NO_THROW((void)norms_over_windows(std::vector<double>(28, 1.0), small_config()));
}

TEST(NormsOverWindows, IndependentOfThreadCount) {
    const auto series = lppls_series(1.0);
    const auto one = norms_over_windows(series, small_config(1));
    for (unsigned threads : {2u, 3u, 8u}) {
        const auto many = norms_over_windows(series, small_config(threads));
        EXPECT_EQ(one.values, many.values);
        EXPECT_EQ(one.window_start, many.window_start);
    }
}

TEST(NormsOverWindows, MirroredBubbleGivesTheSameSignal) {
    const auto positive = norms_over_windows(lppls_series(1.0), small_config());
    const auto negative = norms_over_windows(lppls_series(-1.0), small_config());
    ASSERT_EQ(positive.size(), negative.size());
    for (std::size_t t = 0; t < positive.size(); ++t) {
        EXPECT_LE(std::abs(positive.values[t] - negative.values[t]), 1e-9 * positive.values[t]) << t;
    }
}

TEST(NormsOverWindows, InfinityNormIsHalfTheLongestBar) {
    std::vector<double> series(120);
    for (std::size_t i = 0; i < series.size(); ++i) series[i] = std::sin(2 * std::numbers::pi * i / 20.0);
    auto cfg = small_config();
    cfg.embedding = {2, 5, 40};
    cfg.p = kInfinityNorm;
    const auto signal = norms_over_windows(series, cfg);
    for (std::size_t t = 0; t < signal.size(); t += 17) {
        const auto cloud = window_at(delay_embed(series, 2, 5), t, 40);
        const auto h1 = rips_persistence(pairwise_distances(cloud)).h1;
        EXPECT_EQ(signal.values[t], linf_norm_closed_form(h1));
    }
}

TEST(WindowNorm, UnitSquare) {
    const PointCloud square(2, {0, 0, 1, 0, 1, 1, 0, 1});
    EXPECT_NEAR(window_norm(square, TdaConfig{}), 0.042893218813452497, 1e-15);
}

TEST(PeakReport, Examples) {
    const std::vector<double> a{1, 3, 2};
    auto r = peak_report(a);
    EXPECT_EQ(r.index, 1u);
    EXPECT_EQ(r.value, 3.0);
    EXPECT_EQ(r.position, 0.5);

    const std::vector<double> b{4, 4, 4};
    EXPECT_EQ(peak_report(b).index, 0u);

    const std::vector<double> c{0, 0, 5, 0};
    r = peak_report(c);
    EXPECT_EQ(r.index, 2u);
    EXPECT_DOUBLE_EQ(r.position, 2.0 / 3.0);

    const std::vector<double> single{7};
    EXPECT_EQ(peak_report(single).position, 0.0);
    EXPECT_THROW((void)peak_report(std::vector<double>{}), std::invalid_argument);
}

TEST(NormsOverWindows, BitcoinFitSpikeRegression) {
    // Pinned from a full pipeline run on the noise-free series.
    const LpplsParams p{637.0, 0.3003, 6.889, 11.11, -2.937e-4, 4.372e-5, -3.362e-5};
    TdaConfig cfg;
    const auto signal = norms_over_windows(generate_synthetic(p, {637, 0.0, 0}), cfg);
    ASSERT_EQ(signal.size(), 551u);
    const auto peak = peak_report(signal);
    EXPECT_EQ(peak.index, 528u);
    EXPECT_EQ(signal.window_end[peak.index], 528u + 71u + 15u);
}
