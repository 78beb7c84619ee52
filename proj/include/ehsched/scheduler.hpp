#pragma once

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ehsched/channel.hpp"
#include "ehsched/energy.hpp"
#include "ehsched/inner_solver.hpp"
#include "ehsched/params.hpp"
#include "ehsched/voice.hpp"

namespace ehsched {

/// Outer stochastic multipliers, one pair per data user.
struct DualState {
    std::vector<double> lambda;  // price of falling short of the common target
    std::vector<double> mu;      // price of exceeding the backhaul share

    explicit DualState(std::size_t users = 0)
        : lambda(users, 0.0), mu(users, 0.0) {}
};

/// Per-user share of the backhaul left after the voice reservation, with the
/// safety factor xi.
inline double per_user_backhaul_cap(const SystemParams& p) {
    const double numerator = p.r_bh - p.r_bh_voice;
    if (numerator <= 0)
        throw std::invalid_argument(
            "per_user_backhaul_cap: r_bh must exceed r_bh_voice");
    return numerator / (p.xi * p.num_data_users);
}

/// Common target rate s*(lambda) = (U')^{-1}(sum lambda) for U = log, clipped
/// to [0, cap]; an all-zero lambda maps to the cap.
inline double target_rate_s_star(const std::vector<double>& lambda,
                                 double cap) {
    const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    if (total <= 0) return cap;
    return std::clamp(1.0 / total, 0.0, cap);
}

/// Projected stochastic updates driven by this slot's realized rates:
///   lambda_k += eps (s* - r_k),  mu_k += eps (r_k - cap), both floored at 0.
inline void update_duals(DualState& duals, double s_star,
                         const std::vector<double>& rates, double cap,
                         double eps) {
    if (rates.size() != duals.lambda.size())
        throw std::invalid_argument("update_duals: rates size mismatch");
    for (std::size_t k = 0; k < rates.size(); ++k) {
        duals.lambda[k] =
            std::max(0.0, duals.lambda[k] + eps * (s_star - rates[k]));
        duals.mu[k] = std::max(0.0, duals.mu[k] + eps * (rates[k] - cap));
    }
}

struct SlotResult {
    long slot = 0;
    bool outage = false;
    double battery_before = 0;
    double consumed = 0;       // E(t), joules
    double s_star = 0;
    double cap = 0;
    VoiceAllocation voice;
    DataAllocation data;
    std::vector<double> weights;  // lambda - mu fed to the inner solver
};

/// One slot of the stochastic maximin scheduler: energy budget, voice
/// admission, weighted data solve, energy bookkeeping, dual updates.
/// `battery_level` is the level the slot starts from (callers running on grid
/// power pass b_max). The battery/harvest update itself stays with the
/// simulation loop.
/// `frozen_voice`, when given and still affordable, is reused instead of a
/// fresh admission (the voice_period_slots option); the radiated-power target
/// still tracks the current energy budget.
inline SlotResult run_slot(const SystemParams& p,
                           const ChannelSnapshot& snap, double battery_level,
                           DualState& duals,
                           const VoiceAllocation* frozen_voice = nullptr) {
    if (static_cast<int>(snap.data_gains.size()) != p.num_data_users ||
        static_cast<int>(snap.voice_gains.size()) != p.num_voice_users)
        throw std::invalid_argument("run_slot: snapshot size mismatch");

    SlotResult res;
    res.slot = snap.slot;
    res.battery_before = battery_level;
    res.cap = per_user_backhaul_cap(p);
    res.s_star = target_rate_s_star(duals.lambda, res.cap);
    res.data.powers.assign(p.num_data_users, 0.0);
    res.data.codes.assign(p.num_data_users, 0.0);
    res.data.rates.assign(p.num_data_users, 0.0);
    res.weights.resize(p.num_data_users);
    for (int k = 0; k < p.num_data_users; ++k)
        res.weights[k] = duals.lambda[k] - duals.mu[k];

    const double phi = traffic_budget_phi(battery_level, p);
    const double pilot_fixed = p.slot_duration * (p.p_cpich + p.p_fixed);
    if (phi < 0) {
        // Not enough charge to key the pilot and circuitry at full duty:
        // skip the slot, drain what the fixed load takes, keep learning.
        res.outage = true;
        res.voice.powers.assign(p.num_voice_users, 0.0);
        for (int k = 0; k < p.num_voice_users; ++k)
            res.voice.dropped.push_back(k);
        res.consumed = std::min(battery_level, pilot_fixed);
        update_duals(duals, res.s_star, res.data.rates, res.cap, p.epsilon);
        return res;
    }

    if (frozen_voice &&
        frozen_voice->total_power * p.slot_duration <= phi) {
        res.voice = *frozen_voice;
        res.voice.p_rad = radiated_power_star(phi, p);
    } else {
        res.voice = admit_voice(snap.voice_gains, phi, p);
    }

    WeightedInstance inst;
    inst.weights = res.weights;
    inst.gains = snap.data_gains;
    inst.p_rad = res.voice.p_rad;
    inst.power_budget =
        std::max(0.0, phi / p.slot_duration - res.voice.total_power);
    inst.n_max = p.n_max;
    inst.chip_rate = p.chip_rate;
    inst.m_d = p.m_d;
    inst.theta = p.theta;
    inst.sigma2 = p.sigma2;
    res.data = solve_inner(inst, p.solver);

    const double data_power =
        std::accumulate(res.data.powers.begin(), res.data.powers.end(), 0.0);
    res.consumed = slot_energy(p.p_cpich, res.voice.total_power + data_power,
                               p.p_fixed, p.slot_duration);
    assert(res.consumed <=
           energy_cap_g(battery_level, p) * (1 + 1e-9) + 1e-18);

    update_duals(duals, res.s_star, res.data.rates, res.cap, p.epsilon);
    return res;
}

}  // namespace ehsched
