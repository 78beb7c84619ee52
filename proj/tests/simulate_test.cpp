#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ehsched/simulate.hpp"

namespace {

using namespace ehsched;

const char* kSimConfig = R"(
voice_users = 2
data_users = 2
p_bs_max = 9 dBm
p_cpich = 4 dBm
p_fixed = 3 dBm
sigma2 = -102 dBm
n_max = 15
theta = 0.35
m_v = 128
m_d = 16
gamma_over_mv = -13.7 dB
chip_rate = 3.84 MHz
b_max = 410 uJ
packet_energy = 30 uJ
alpha = 0.3
slot_duration = 2 ms
harvest_prob = 0.5
r_bh = 2 Mbps
r_bh_voice = 173 Kbps
xi = 1.2
epsilon = 1e-6
voice_distances = 80, 100
data_distances = 145, 170
path_loss_exponent = 3.5
path_loss_ref_db = 40
fading_correlation = 0
seed = 42
solver_max_outer = 20
)";

SystemParams sim_params() { return load_params(kSimConfig); }

std::string csv_string(const MetricsLog& log) {
    std::ostringstream os;
    write_csv(log, os);
    return os.str();
}

TEST(SchedulerKind, NamesRoundTrip) {
    for (const char* name : {"stochastic", "pf-per-user", "pf-sum"})
        EXPECT_STREQ(scheduler_kind_name(parse_scheduler_kind(name)), name);
    EXPECT_THROW(parse_scheduler_kind("round-robin"), std::invalid_argument);
}

TEST(RunSimulation, SameSeedSameBytes) {
    const SystemParams p = sim_params();
    const auto a = run_simulation(p, SchedulerKind::Stochastic, 30, 7, true);
    const auto b = run_simulation(p, SchedulerKind::Stochastic, 30, 7, true);
    EXPECT_EQ(csv_string(a.log), csv_string(b.log));
    const auto c = run_simulation(p, SchedulerKind::Stochastic, 30, 8, true);
    EXPECT_NE(csv_string(a.log), csv_string(c.log));
    EXPECT_THROW(run_simulation(p, SchedulerKind::Stochastic, 0, 7, true),
                 std::invalid_argument);
}

TEST(RunSimulation, GridPowerPinsTheBattery) {
    const SystemParams p = sim_params();
    const auto res = run_simulation(p, SchedulerKind::Stochastic, 40, 3, true);
    ASSERT_EQ(res.log.rows.size(), 40u);
    std::vector<double> sums(p.num_data_users, 0.0);
    for (const auto& row : res.log.rows) {
        EXPECT_DOUBLE_EQ(row.battery, p.b_max);
        EXPECT_EQ(row.outage, 0);
        for (int k = 0; k < p.num_data_users; ++k) {
            sums[k] += row.rates[k];
            const double avg = sums[k] / static_cast<double>(row.slot + 1);
            ASSERT_NEAR(row.avg_rates[k], avg, std::abs(avg) * 1e-12 + 1e-12);
        }
    }
    EXPECT_EQ(res.summary.slots, 40);
}

TEST(RunSimulation, ColdStartDualTrace) {
    const SystemParams p = sim_params();
    const auto res = run_simulation(p, SchedulerKind::Stochastic, 2, 11, true);
    const MetricsRow& first = res.log.rows[0];
    const double cap = per_user_backhaul_cap(p);
    for (int k = 0; k < p.num_data_users; ++k) {
        EXPECT_DOUBLE_EQ(first.rates[k], 0.0);
        EXPECT_NEAR(first.lambda[k], p.epsilon * cap, 1e-15);
        EXPECT_DOUBLE_EQ(first.mu[k], 0.0);
    }
    // Rates turn on once the multipliers are positive.
    const MetricsRow& second = res.log.rows[1];
    double total = 0;
    for (double r : second.rates) total += r;
    EXPECT_GT(total, 0.0);
}

TEST(RunSimulation, VoiceProfileFrozenWithinPeriod) {
    SystemParams p = sim_params();
    p.voice_period_slots = 5;
    const auto res = run_simulation(p, SchedulerKind::Stochastic, 15, 9, true);
    for (int block = 0; block < 3; ++block) {
        const double head = res.log.rows[block * 5].voice_power;
        EXPECT_GT(head, 0.0);
        for (int i = 1; i < 5; ++i)
            EXPECT_DOUBLE_EQ(res.log.rows[block * 5 + i].voice_power, head)
                << "block " << block << " slot " << i;
    }
}

TEST(RunSimulation, BatteryRunsStayInRange) {
    const SystemParams p = sim_params();
    const auto res =
        run_simulation(p, SchedulerKind::Stochastic, 200, 5, false);
    for (const auto& row : res.log.rows) {
        ASSERT_GE(row.battery, 0.0);
        ASSERT_LE(row.battery, p.b_max * (1 + 1e-12));
    }
}

TEST(RunSimulation, PfVariantsProduceCappedRates) {
    const SystemParams p = sim_params();
    const double user_cap = per_user_backhaul_cap(p);
    const double sum_cap = available_backhaul(p) / p.xi;
    const auto per =
        run_simulation(p, SchedulerKind::PfPerUser, 30, 13, true);
    const auto sum = run_simulation(p, SchedulerKind::PfSum, 30, 13, true);
    for (const auto& row : per.log.rows) {
        for (double r : row.rates) {
            ASSERT_TRUE(std::isfinite(r));
            ASSERT_GE(r, 0.0);
            ASSERT_LE(r, user_cap * (1 + 1e-3));
        }
        EXPECT_DOUBLE_EQ(row.cap, user_cap);
    }
    for (const auto& row : sum.log.rows) {
        double total = 0;
        for (double r : row.rates) total += r;
        ASSERT_LE(total, sum_cap * (1 + 1e-3));
        EXPECT_DOUBLE_EQ(row.cap, sum_cap);
    }
}

class SweepFiles : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = ::testing::TempDir();
        while (!dir_.empty() && dir_.back() == '/') dir_.pop_back();
        config_path_ = dir_ + "/ehsched_sim_config.conf";
        std::ofstream(config_path_) << kSimConfig;
    }
    std::string dir_, config_path_;
};

TEST_F(SweepFiles, SpecParsesAndResolvesConfigPath) {
    const std::string text =
        "config = ehsched_sim_config.conf\n"
        "variable = r_bh\n"
        "values = 500 Kbps, 2 Mbps\n"
        "slots = 10\n"
        "schedulers = stochastic, pf-per-user\n"
        "seed = 7\n"
        "grid_power = true\n";
    const SweepSpec spec = load_sweep_spec(text, dir_);
    EXPECT_EQ(spec.config_path, config_path_);
    EXPECT_EQ(spec.variable, "r_bh");
    ASSERT_EQ(spec.values.size(), 2u);
    EXPECT_DOUBLE_EQ(spec.values[0], 500e3);
    EXPECT_DOUBLE_EQ(spec.values[1], 2e6);
    EXPECT_EQ(spec.value_texts[0], "500 Kbps");
    EXPECT_EQ(spec.slots, 10);
    ASSERT_EQ(spec.schedulers.size(), 2u);
    EXPECT_EQ(spec.schedulers[1], SchedulerKind::PfPerUser);
    EXPECT_EQ(spec.seed, 7u);
    EXPECT_TRUE(spec.grid_power);
}

TEST_F(SweepFiles, SpecValidation) {
    const std::string good =
        "config = c.conf\nvariable = alpha\nvalues = 0.1, 0.3\n"
        "slots = 5\nschedulers = stochastic\n";
    EXPECT_NO_THROW(load_sweep_spec(good, dir_));
    EXPECT_THROW(load_sweep_spec(good + "typo_key = 1\n", dir_),
                 std::invalid_argument);
    EXPECT_THROW(
        load_sweep_spec("config = c.conf\nvariable = bogus\n"
                        "values = 1\nslots = 5\nschedulers = stochastic\n",
                        dir_),
        std::invalid_argument);
    EXPECT_THROW(
        load_sweep_spec("config = c.conf\nvariable = harvest_prob\n"
                        "values = 1.5\nslots = 5\nschedulers = stochastic\n",
                        dir_),
        std::invalid_argument);
}

TEST_F(SweepFiles, BackhaulSweepAnchors) {
    const std::string text =
        "config = ehsched_sim_config.conf\n"
        "variable = r_bh\n"
        "values = 500 Kbps, 2 Mbps\n"
        "slots = 10\n"
        "schedulers = stochastic\n"
        "seed = 7\n"
        "grid_power = true\n";
    const auto rows = run_sweep(load_sweep_spec(text, dir_));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(rows[0].available_backhaul, 272500.0, 1e-6);
    EXPECT_NEAR(rows[1].available_backhaul, 1.5225e6, 1e-6);
    EXPECT_NEAR(rows[0].per_user_cap, 136250.0, 1e-6);
    EXPECT_NEAR(rows[1].per_user_cap, 761250.0, 1e-6);
    EXPECT_EQ(rows[0].summary.slots, 10);

    std::ostringstream os;
    write_sweep_csv("r_bh", rows, os);
    const std::string csv = os.str();
    EXPECT_EQ(csv.substr(0, 21), "r_bh,value,scheduler,");
    EXPECT_NE(csv.find("\n500 Kbps,5e+05,stochastic,272500,136250,10,"),
              std::string::npos);
}

TEST(ApplySweepValue, Guards) {
    SystemParams p = sim_params();
    apply_sweep_value(p, "alpha", 0.5);
    EXPECT_DOUBLE_EQ(p.alpha, 0.5);
    apply_sweep_value(p, "harvest_prob", 0.9);
    EXPECT_DOUBLE_EQ(p.harvest.at(0), 0.9);
    EXPECT_THROW(apply_sweep_value(p, "r_bh", 100.0), std::invalid_argument);
    EXPECT_THROW(apply_sweep_value(p, "nope", 1.0), std::invalid_argument);
}

}  // namespace
