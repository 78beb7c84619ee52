#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ehsched/metrics.hpp"

namespace {

using namespace ehsched;

TEST(DoubleText, RoundTripIsExact) {
    for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 6.309573444801943e-14,
                     253750.0, -2.5e-3, 1e300, 4.9406564584124654e-324}) {
        EXPECT_EQ(parse_double_exact(format_double(v)), v);
        EXPECT_EQ(parse_double_exact(format_double(-v)), -v);
    }
}

TEST(DoubleText, ParserRejectsGarbage) {
    EXPECT_THROW(parse_double_exact(""), std::runtime_error);
    EXPECT_THROW(parse_double_exact("1.5x"), std::runtime_error);
    EXPECT_THROW(parse_double_exact("nope"), std::runtime_error);
    EXPECT_NO_THROW(parse_double_exact("-3.25e-7"));
}

MetricsLog sample_log() {
    MetricsLog log;
    log.data_users = 2;
    for (long t = 0; t < 4; ++t) {
        MetricsRow r;
        r.slot = t;
        r.outage = (t == 2) ? 1 : 0;
        r.battery = 400e-6 - 10e-6 * t;
        r.consumed = 15e-6;
        r.harvested = (t % 2) ? 30e-6 : 0.0;
        r.s_star = 1e5 + t;
        r.cap = 253750.0;
        r.voice_dropped = 0;
        r.voice_power = 1e-3;
        r.data_power = 5e-3;
        r.rates = {1e5 + 7.0 * t, 9e4 - 3.0 * t};
        r.avg_rates = r.rates;
        r.lambda = {1e-4, 2e-4};
        r.mu = {0.0, 1e-6};
        log.rows.push_back(r);
    }
    return log;
}

TEST(Csv, WriteReadWriteIsByteStable) {
    const MetricsLog log = sample_log();
    std::ostringstream first;
    write_csv(log, first);

    std::istringstream in(first.str());
    const MetricsLog back = read_csv(in);
    ASSERT_EQ(back.data_users, log.data_users);
    ASSERT_EQ(back.rows.size(), log.rows.size());

    std::ostringstream second;
    write_csv(back, second);
    EXPECT_EQ(first.str(), second.str());
}

TEST(Csv, HeaderNamesEveryColumn) {
    EXPECT_EQ(csv_header(1),
              "slot,outage,battery,consumed,harvested,s_star,cap,"
              "voice_dropped,voice_power,data_power,"
              "rate_0,avg_rate_0,lambda_0,mu_0");
}

TEST(Csv, RaggedRowIsRejected) {
    std::istringstream in(csv_header(1) + "\n0,0,1,1\n");
    EXPECT_THROW(read_csv(in), std::runtime_error);
    std::istringstream empty("");
    EXPECT_THROW(read_csv(empty), std::runtime_error);
}

TEST(Jain, KnownValues) {
    EXPECT_DOUBLE_EQ(jain_index({5.0, 5.0, 5.0}), 1.0);
    EXPECT_NEAR(jain_index({1.0, 0, 0, 0, 0, 0}), 1.0 / 6.0, 1e-15);
    EXPECT_DOUBLE_EQ(jain_index({1.0, 3.0}), 0.8);
    EXPECT_THROW(jain_index({}), std::invalid_argument);
    EXPECT_THROW(jain_index({0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(jain_index({1.0, -1.0}), std::invalid_argument);
}

TEST(Summaries, WholeRunStatistics) {
    const MetricsLog log = sample_log();
    const RunSummary s = summarize(log);
    EXPECT_EQ(s.slots, 4);
    EXPECT_EQ(s.outages, 1);
    EXPECT_NEAR(s.mean_battery, 385e-6, 1e-12);
    EXPECT_NEAR(s.mean_consumed, 15e-6, 1e-18);
    ASSERT_EQ(s.mean_rate.size(), 2u);
    EXPECT_NEAR(s.mean_rate[0], 1e5 + 7.0 * 1.5, 1e-9);
    EXPECT_NEAR(s.mean_rate[1], 9e4 - 3.0 * 1.5, 1e-9);
    EXPECT_NEAR(s.sum_rate, s.mean_rate[0] + s.mean_rate[1], 1e-9);
    EXPECT_DOUBLE_EQ(s.min_rate, s.mean_rate[1]);
    EXPECT_DOUBLE_EQ(s.max_rate, s.mean_rate[0]);
    EXPECT_NEAR(s.jain, jain_index(s.mean_rate), 1e-15);
}

TEST(Summaries, TailMatchesExplicitRange) {
    const MetricsLog log = sample_log();
    const RunSummary tail = summarize_tail(log, 0.5);
    const RunSummary range = summarize_range(log, 2);
    EXPECT_EQ(tail.slots, range.slots);
    EXPECT_EQ(tail.outages, range.outages);
    EXPECT_DOUBLE_EQ(tail.mean_battery, range.mean_battery);
    EXPECT_DOUBLE_EQ(tail.sum_rate, range.sum_rate);
    EXPECT_THROW(summarize_tail(log, 0.0), std::invalid_argument);
    EXPECT_THROW(summarize_tail(log, 1.5), std::invalid_argument);

    const RunSummary none = summarize_range(log, 99);
    EXPECT_EQ(none.slots, 0);
    EXPECT_EQ(none.jain, 0.0);
}

}  // namespace
