#pragma once

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ehsched/params.hpp"

namespace ehsched {

/// Total power the amplifier radiates in a serving slot: the traffic budget
/// spread over the slot plus the always-on pilot.
inline double radiated_power_star(double phi, const SystemParams& p) {
    if (phi < 0)
        throw std::invalid_argument(
            "radiated_power_star: negative traffic budget (outage slot)");
    return phi / p.slot_duration + p.p_cpich;
}

/// Minimum voice power hitting the target SINR gamma under the total-power
/// interference approximation: p = gamma * (theta * p_rad * h + sigma2) /
/// (m_v * h).
inline double voice_power(double gain, double p_rad, double gamma,
                          const SystemParams& p) {
    if (gain <= 0)
        throw std::invalid_argument("voice_power: gain must be positive");
    return gamma * (p.theta * p_rad * gain + p.sigma2) / (p.m_v * gain);
}

/// Coefficients of the closed-form admissibility test
///   sum_k 1/h_k <= kappa1 * phi - kappa2
/// for n_served voice users at target SINR gamma.
inline double voice_kappa1(int n_served, double gamma, const SystemParams& p) {
    return (p.m_v - n_served * p.theta * gamma) /
           (p.sigma2 * p.slot_duration * gamma);
}

inline double voice_kappa2(int n_served, double gamma, const SystemParams& p) {
    return n_served * p.theta * p.p_cpich / p.sigma2;
}

struct VoiceFeasibility {
    bool feasible = false;
    double margin = 0;  // (kappa1 * phi - kappa2) - sum 1/h, positive if ok
};

/// Checks whether every listed user can be served at SINR gamma within the
/// traffic budget phi.
inline VoiceFeasibility feasibility_check(const std::vector<double>& gains,
                                          double phi, double gamma,
                                          const SystemParams& p) {
    const int n = static_cast<int>(gains.size());
    if (n == 0) return {true, 0.0};
    const double kappa1 = voice_kappa1(n, gamma, p);
    if (kappa1 <= 0)
        throw std::invalid_argument(
            "feasibility_check: nonpositive kappa1; gamma too large for this "
            "many voice users");
    double inv_sum = 0;
    for (double h : gains) {
        if (h <= 0)
            throw std::invalid_argument(
                "feasibility_check: gains must be positive");
        inv_sum += 1.0 / h;
    }
    const double margin = kappa1 * phi - voice_kappa2(n, gamma, p) - inv_sum;
    return {margin >= 0, margin};
}

struct VoiceAllocation {
    std::vector<double> powers;  // per input user; 0 for dropped users
    std::vector<int> dropped;    // indices of users not served this slot
    double p_rad = 0;            // total radiated power target
    double gamma_used = 0;       // target SINR after any scaling
    double total_power = 0;
};

/// Admits as many voice users as the traffic budget allows and assigns the
/// closed-form powers. DropWorst removes lowest-gain users until feasible;
/// ScaleGamma first lowers the target SINR down to a floor, then falls back
/// to dropping at the floored target.
inline VoiceAllocation admit_voice(const std::vector<double>& gains,
                                   double phi, const SystemParams& p) {
    if (phi < 0)
        throw std::invalid_argument("admit_voice: negative traffic budget");
    VoiceAllocation out;
    out.powers.assign(gains.size(), 0.0);
    out.p_rad = radiated_power_star(phi, p);
    out.gamma_used = p.gamma;
    if (gains.empty()) return out;

    std::vector<int> served(gains.size());
    std::iota(served.begin(), served.end(), 0);
    auto served_gains = [&] {
        std::vector<double> g;
        g.reserve(served.size());
        for (int k : served) g.push_back(gains[k]);
        return g;
    };

    if (p.admission == AdmissionPolicy::ScaleGamma) {
        const double floor = p.gamma_floor_factor * p.gamma;
        while (!feasibility_check(served_gains(), phi, out.gamma_used, p)
                    .feasible &&
               out.gamma_used * p.gamma_scale_step >= floor)
            out.gamma_used *= p.gamma_scale_step;
    }
    while (!served.empty() &&
           !feasibility_check(served_gains(), phi, out.gamma_used, p)
                .feasible) {
        const auto worst = std::min_element(
            served.begin(), served.end(),
            [&](int a, int b) { return gains[a] < gains[b]; });
        out.dropped.push_back(*worst);
        served.erase(worst);
    }
    std::sort(out.dropped.begin(), out.dropped.end());

    for (int k : served) {
        out.powers[k] = voice_power(gains[k], out.p_rad, out.gamma_used, p);
        out.total_power += out.powers[k];
    }
    assert(out.total_power * p.slot_duration <= phi * (1 + 1e-9) + 1e-18);
    return out;
}

}  // namespace ehsched
