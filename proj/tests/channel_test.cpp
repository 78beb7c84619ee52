#include <gtest/gtest.h>

#include <cmath>

#include "ehsched/channel.hpp"

namespace {

using namespace ehsched;

SystemParams geometry() {
    SystemParams p;
    p.num_voice_users = 2;
    p.num_data_users = 3;
    p.voice_distances = {80, 120};
    p.data_distances = {100, 150, 200};
    p.path_loss_exponent = 3.5;
    p.path_loss_ref_db = 40.0;
    p.path_loss_ref_distance = 1.0;
    p.fading_correlation = 0.0;
    return p;
}

TEST(PathLoss, Anchors) {
    // 40 dB at 1 m by construction.
    EXPECT_NEAR(path_loss_gain(1.0, 3.5, 40.0, 1.0), 1e-4, 1e-12);
    // 100 m: 40 + 35*2 = 110 dB.
    EXPECT_NEAR(path_loss_gain(100.0, 3.5, 40.0, 1.0), 1e-11, 1e-17);
    // Exponent 2 doubles distance -> quarter gain.
    const double g1 = path_loss_gain(50.0, 2.0, 40.0, 1.0);
    const double g2 = path_loss_gain(100.0, 2.0, 40.0, 1.0);
    EXPECT_NEAR(g1 / g2, 4.0, 1e-9);
    EXPECT_THROW(path_loss_gain(0.0, 3.5, 40.0, 1.0), std::invalid_argument);
}

TEST(Fading, UnitMeanPower) {
    SystemParams p = geometry();
    Rng rng(12345);
    FadingProcess f(p, rng);
    const double pl = f.data_path_loss()[0];
    double acc = 0;
    const int n = 200000;
    for (int t = 0; t < n; ++t) {
        ChannelSnapshot s = f.advance(t, rng);
        acc += s.data_gains[0] / pl;
    }
    EXPECT_NEAR(acc / n, 1.0, 0.02);  // E|g|^2 = 1 within 2%
}

TEST(Fading, CorrelatedSlots) {
    SystemParams p = geometry();
    p.fading_correlation = 0.9;
    Rng rng(99);
    FadingProcess f(p, rng);
    // The envelope is AR(1) with coefficient rho; the POWER |g|^2 then has
    // lag-1 autocorrelation rho^2. Estimate it empirically.
    const int n = 200000;
    std::vector<double> x;
    x.reserve(n);
    for (int t = 0; t < n; ++t) x.push_back(f.advance(t, rng).data_gains[1]);
    double mean = 0;
    for (double v : x) mean += v;
    mean /= n;
    double num = 0, den = 0;
    for (int t = 0; t + 1 < n; ++t) {
        num += (x[t] - mean) * (x[t + 1] - mean);
        den += (x[t] - mean) * (x[t] - mean);
    }
    EXPECT_NEAR(num / den, 0.81, 0.03);
}

TEST(Fading, IndependentWhenRhoZero) {
    SystemParams p = geometry();
    Rng rng(7);
    FadingProcess f(p, rng);
    const int n = 100000;
    std::vector<double> x;
    x.reserve(n);
    for (int t = 0; t < n; ++t) x.push_back(f.advance(t, rng).data_gains[2]);
    double mean = 0;
    for (double v : x) mean += v;
    mean /= n;
    double num = 0, den = 0;
    for (int t = 0; t + 1 < n; ++t) {
        num += (x[t] - mean) * (x[t + 1] - mean);
        den += (x[t] - mean) * (x[t] - mean);
    }
    EXPECT_NEAR(num / den, 0.0, 0.02);
}

TEST(Fading, DeterministicPerSeed) {
    SystemParams p = geometry();
    Rng a(42), b(42);
    FadingProcess fa(p, a), fb(p, b);
    for (int t = 0; t < 100; ++t) {
        ChannelSnapshot sa = fa.advance(t, a), sb = fb.advance(t, b);
        ASSERT_EQ(sa.voice_gains, sb.voice_gains);
        ASSERT_EQ(sa.data_gains, sb.data_gains);
    }
}

TEST(Fading, SnapshotShapes) {
    SystemParams p = geometry();
    Rng rng(1);
    FadingProcess f(p, rng);
    ChannelSnapshot s = f.advance(0, rng);
    EXPECT_EQ(s.voice_gains.size(), 2u);
    EXPECT_EQ(s.data_gains.size(), 3u);
    for (double g : s.voice_gains) EXPECT_GT(g, 0.0);
    for (double g : s.data_gains) EXPECT_GT(g, 0.0);
}

}  // namespace
