#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "ehsched/params.hpp"
#include "ehsched/units.hpp"

namespace {

using namespace ehsched;

TEST(Units, PowerSuffixes) {
    EXPECT_DOUBLE_EQ(parse_power("2 W", "k"), 2.0);
    EXPECT_DOUBLE_EQ(parse_power("5 mW", "k"), 5e-3);
    EXPECT_DOUBLE_EQ(parse_power("7uW", "k"), 7e-6);
    EXPECT_NEAR(parse_power("9 dBm", "k"), 7.943282e-3, 1e-9);
    EXPECT_NEAR(parse_power("-102 dBm", "k"), 6.309573e-14, 1e-19);
    EXPECT_NEAR(parse_power("0 dBm", "k"), 1e-3, 1e-18);
}

TEST(Units, EnergyTimeRate) {
    EXPECT_DOUBLE_EQ(parse_energy("410 uJ", "k"), 410e-6);
    EXPECT_DOUBLE_EQ(parse_energy("0.5 J", "k"), 0.5);
    EXPECT_DOUBLE_EQ(parse_time("2 ms", "k"), 2e-3);
    EXPECT_DOUBLE_EQ(parse_time("1 s", "k"), 1.0);
    EXPECT_DOUBLE_EQ(parse_rate("500 Kbps", "k"), 500e3);
    EXPECT_DOUBLE_EQ(parse_rate("2 Mbps", "k"), 2e6);
    EXPECT_DOUBLE_EQ(parse_rate("173 Kbps", "k"), 173e3);
    EXPECT_DOUBLE_EQ(parse_rate("10 bps", "k"), 10.0);
    EXPECT_DOUBLE_EQ(parse_frequency("3.84 MHz", "k"), 3.84e6);
}

TEST(Units, GainAndNumbers) {
    EXPECT_NEAR(parse_gain("-13.7 dB", "k"), std::pow(10.0, -1.37), 1e-12);
    EXPECT_DOUBLE_EQ(parse_gain("0 dB", "k"), 1.0);
    EXPECT_DOUBLE_EQ(parse_gain("0.25", "k"), 0.25);
    EXPECT_DOUBLE_EQ(parse_number("1e-3", "k"), 1e-3);
    EXPECT_THROW(parse_number("3 dB", "k"), std::invalid_argument);
    EXPECT_THROW(parse_power("5 q", "k"), std::invalid_argument);
    EXPECT_THROW(parse_power("", "k"), std::invalid_argument);
    EXPECT_THROW(parse_rate("fast", "k"), std::invalid_argument);
}

std::string base_config() {
    return R"(voice_users = 3
data_users = 6
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
epsilon = 1e-3
voice_distances = 80, 100, 120
data_distances = 145, 150, 155, 160, 165, 170
path_loss_exponent = 3.5
path_loss_ref_db = 40
)";
}

TEST(LoadParams, RoundTripValues) {
    const SystemParams p = load_params(base_config());
    EXPECT_EQ(p.num_voice_users, 3);
    EXPECT_EQ(p.num_data_users, 6);
    EXPECT_NEAR(p.p_bs_max, 7.943282e-3, 1e-8);
    EXPECT_NEAR(p.p_cpich, 2.511886e-3, 1e-8);
    EXPECT_NEAR(p.p_fixed, 1.995262e-3, 1e-8);
    EXPECT_NEAR(p.sigma2, 6.309573e-14, 1e-19);
    EXPECT_DOUBLE_EQ(p.n_max, 15.0);
    EXPECT_DOUBLE_EQ(p.theta, 0.35);
    // gamma = m_v * 10^(-1.37)
    EXPECT_NEAR(p.gamma, 128.0 * std::pow(10.0, -1.37), 1e-9);
    EXPECT_DOUBLE_EQ(p.b_max, 410e-6);
    EXPECT_DOUBLE_EQ(p.b_init, 410e-6);  // defaults to full
    EXPECT_DOUBLE_EQ(p.slot_duration, 2e-3);
    EXPECT_DOUBLE_EQ(p.r_bh, 2e6);
    EXPECT_DOUBLE_EQ(p.r_bh_voice, 173e3);
    EXPECT_DOUBLE_EQ(p.xi, 1.2);
    EXPECT_DOUBLE_EQ(p.harvest.at(0), 0.5);
    EXPECT_DOUBLE_EQ(p.harvest.at(999), 0.5);
    ASSERT_EQ(p.data_distances.size(), 6u);
    EXPECT_DOUBLE_EQ(p.data_distances[5], 170.0);
    EXPECT_DOUBLE_EQ(available_backhaul(p), 2e6 - 173e3);
}

TEST(LoadParams, UnknownKeyRejected) {
    EXPECT_THROW(load_params(base_config() + "bogus_key = 1\n"),
                 std::invalid_argument);
}

TEST(LoadParams, MissingKeyRejected) {
    std::string cfg = base_config();
    const auto pos = cfg.find("epsilon");
    cfg.erase(pos, cfg.find('\n', pos) - pos + 1);
    EXPECT_THROW(load_params(cfg), std::invalid_argument);
}

TEST(LoadParams, DuplicateKeyRejected) {
    EXPECT_THROW(load_params(base_config() + "xi = 1.2\n"),
                 std::invalid_argument);
}

TEST(LoadParams, GammaExclusivity) {
    EXPECT_THROW(load_params(base_config() + "gamma = 5.46\n"),
                 std::invalid_argument);
    std::string cfg = base_config();
    const auto pos = cfg.find("gamma_over_mv");
    cfg.erase(pos, cfg.find('\n', pos) - pos + 1);
    EXPECT_THROW(load_params(cfg), std::invalid_argument);  // neither form
    const SystemParams p = load_params(cfg + "gamma = 5.46\n");
    EXPECT_DOUBLE_EQ(p.gamma, 5.46);
}

TEST(LoadParams, RangeChecks) {
    auto swap = [](std::string cfg, const std::string& key,
                   const std::string& val) {
        const auto pos = cfg.find(key + " ");
        cfg.erase(pos, cfg.find('\n', pos) - pos + 1);
        return cfg + key + " = " + val + "\n";
    };
    EXPECT_THROW(load_params(swap(base_config(), "alpha", "0")),
                 std::invalid_argument);
    EXPECT_THROW(load_params(swap(base_config(), "alpha", "1.5")),
                 std::invalid_argument);
    EXPECT_THROW(load_params(swap(base_config(), "theta", "1.2")),
                 std::invalid_argument);
    EXPECT_THROW(load_params(swap(base_config(), "xi", "0.8")),
                 std::invalid_argument);
    EXPECT_THROW(load_params(swap(base_config(), "epsilon", "0")),
                 std::invalid_argument);
    // r_bh must exceed the voice reservation
    EXPECT_THROW(load_params(swap(base_config(), "r_bh", "100 Kbps")),
                 std::invalid_argument);
    // distance count must match the user count
    EXPECT_THROW(
        load_params(swap(base_config(), "data_distances", "100, 200")),
        std::invalid_argument);
    // gamma too large for the voice load: m_v <= K theta gamma
    EXPECT_THROW(
        load_params(swap(base_config(), "gamma_over_mv", "-15 dB") +
                    "utility = linear\n"),
        std::invalid_argument);
    EXPECT_THROW(load_params(swap(base_config(), "gamma_over_mv", "0 dB")),
                 std::invalid_argument);
}

TEST(LoadParams, HarvestSchedule) {
    std::string cfg = base_config();
    const auto pos = cfg.find("harvest_prob");
    cfg.erase(pos, cfg.find('\n', pos) - pos + 1);
    const SystemParams p =
        load_params(cfg + "harvest_schedule = 0:0.8, 1000:0.2\n");
    EXPECT_DOUBLE_EQ(p.harvest.at(0), 0.8);
    EXPECT_DOUBLE_EQ(p.harvest.at(999), 0.8);
    EXPECT_DOUBLE_EQ(p.harvest.at(1000), 0.2);
    EXPECT_THROW(load_params(cfg + "harvest_schedule = 5:0.8\n"),
                 std::invalid_argument);  // must start at slot 0
    EXPECT_THROW(load_params(cfg + "harvest_schedule = 0:1.5\n"),
                 std::invalid_argument);
    EXPECT_THROW(load_params(cfg), std::invalid_argument);  // neither form
}

TEST(LoadParams, SolverOverrides) {
    const SystemParams p = load_params(base_config() +
                                       "solver_max_outer = 120\n"
                                       "solver_tol_primal = 1e-8\n");
    EXPECT_EQ(p.solver.max_outer, 120);
    EXPECT_DOUBLE_EQ(p.solver.tol_primal, 1e-8);
    EXPECT_EQ(p.solver.max_inner, 500);  // untouched default
}

TEST(LoadParams, CommentsAndBlanksIgnored) {
    const SystemParams p =
        load_params("# leading comment\n\n" + base_config() + "\n# trailing\n");
    EXPECT_EQ(p.num_data_users, 6);
}

TEST(LoadParams, MalformedLineRejected) {
    EXPECT_THROW(load_params(base_config() + "not a key value line\n"),
                 std::invalid_argument);
}

}  // namespace
