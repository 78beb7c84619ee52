#pragma once

#include <algorithm>
#include <stdexcept>

#include "ehsched/params.hpp"
#include "ehsched/rng.hpp"

namespace ehsched {

struct BatteryState {
    double level = 0;  // joules
};

struct HarvestSample {
    double amount = 0;  // joules, either 0 or the packet energy
};

/// Bernoulli energy packet: the full packet with probability prob, else 0.
inline HarvestSample sample_harvest(double prob, double packet_energy,
                                    Rng& rng) {
    if (prob < 0 || prob > 1)
        throw std::invalid_argument("sample_harvest: prob must be in [0, 1]");
    return {bernoulli(rng, prob) ? packet_energy : 0.0};
}

/// Energy drawn in one slot: E = T_s * (P_CPICH + P_BS + P_c).
inline double slot_energy(double p_cpich, double p_bs, double p_fixed,
                          double slot_duration) {
    return slot_duration * (p_cpich + p_bs + p_fixed);
}

/// Per-slot energy ceiling g(B): the hardware draw at full traffic power,
/// further limited to the fraction alpha of the stored charge.
inline double energy_cap_g(double battery, const SystemParams& p) {
    const double hardware =
        slot_energy(p.p_cpich, p.p_bs_max, p.p_fixed, p.slot_duration);
    return std::min(hardware, p.alpha * battery);
}

/// Energy left for traffic once the pilot and circuitry are paid:
/// phi(B) = g(B) - T_s * (P_CPICH + P_c). Negative means an outage slot.
inline double traffic_budget_phi(double battery, const SystemParams& p) {
    return energy_cap_g(battery, p) -
           p.slot_duration * (p.p_cpich + p.p_fixed);
}

/// B(t+1) = clamp(B - E + H, 0, B_max). Harvest arriving after the draw is
/// also capped, so energy above B_max is lost.
inline BatteryState update_battery(const BatteryState& b, double consumed,
                                   double harvested, double b_max) {
    if (consumed < 0 || harvested < 0)
        throw std::invalid_argument("update_battery: negative energy");
    return {std::clamp(b.level - consumed + harvested, 0.0, b_max)};
}

/// Steady-state battery level lower bound p * e / alpha implied by draws
/// capped at alpha * B and mean harvest p * e.
inline double expected_battery_lower_bound(double prob, double packet_energy,
                                           double alpha) {
    if (alpha <= 0)
        throw std::invalid_argument(
            "expected_battery_lower_bound: alpha must be positive");
    return prob * packet_energy / alpha;
}

}  // namespace ehsched
