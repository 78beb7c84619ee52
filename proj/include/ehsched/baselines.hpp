#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ehsched/channel.hpp"
#include "ehsched/energy.hpp"
#include "ehsched/inner_solver.hpp"
#include "ehsched/scheduler.hpp"
#include "ehsched/voice.hpp"

namespace ehsched {

/// Exponentially averaged throughput per data user, the classic PF tracker.
struct PfState {
    std::vector<double> avg_throughput;
    double window = 500.0;   // T_c slots
    double floor = 1.0;      // bit/s, keeps cold-start weights finite

    explicit PfState(std::size_t users = 0) : avg_throughput(users, 0.0) {}
};

/// PF weights 1 / max(T_k, floor).
inline std::vector<double> pf_weights(const PfState& st) {
    std::vector<double> w(st.avg_throughput.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        w[k] = 1.0 / std::max(st.avg_throughput[k], st.floor);
    return w;
}

inline void pf_update(PfState& st, const std::vector<double>& rates) {
    if (rates.size() != st.avg_throughput.size())
        throw std::invalid_argument("pf_update: rates size mismatch");
    const double a = 1.0 / st.window;
    for (std::size_t k = 0; k < rates.size(); ++k)
        st.avg_throughput[k] =
            (1.0 - a) * st.avg_throughput[k] + a * rates[k];
}

enum class PfCapMode { PerUser, Sum };

struct PfSlot {
    DataAllocation alloc;
    std::vector<double> eta;  // intra-slot cap multipliers
    int cap_iterations = 0;
};

namespace detail {

/// Power that hits exactly `rate` for fixed codes; inverse of rate_of in p.
inline double power_for_rate(const WeightedInstance& inst, std::size_t k,
                             double codes, double rate) {
    if (codes <= 0 || rate <= 0) return 0;
    const double x =
        std::expm1(rate * inst.m_d * kLn2 / (codes * inst.chip_rate));
    return x * codes * inst.denom(k) / (inst.m_d * inst.gains[k]);
}

}  // namespace detail

/// PF slot solve under an instantaneous backhaul cap, enforced exactly.
///
/// Per-user mode is an active-set sweep: solve unconstrained, pin the most
/// over-cap user to the cap rate — shrinking its code count in proportion so
/// its per-code rate is preserved, which releases both power and codes — and
/// re-solve the others on the leftover budgets; at most K re-solves. The
/// reported eta are the multiplier values implied by stationarity at each
/// pin, (w - beta dp/dr)+.
///
/// Sum mode scales every power by a common factor found by bisection until
/// the rates add up to the cap; cheap and feasible, though not the exact
/// optimum of the capped program (acceptable for a baseline).
inline PfSlot solve_pf_slot(const WeightedInstance& base,
                            const std::vector<double>& weights, PfCapMode mode,
                            double cap, const SolverOptions& opt = {},
                            int max_cap_iters = 30) {
    const std::size_t K = base.size();
    if (weights.size() != K)
        throw std::invalid_argument("solve_pf_slot: weights size mismatch");
    if (cap <= 0)
        throw std::invalid_argument("solve_pf_slot: cap must be positive");

    PfSlot out;
    out.eta.assign(mode == PfCapMode::PerUser ? K : 1, 0.0);

    DataAllocation alloc = solve_inner(base, opt);

    if (mode == PfCapMode::PerUser) {
        std::vector<char> capped(K, 0);
        double last_beta = alloc.beta;
        const int rounds = std::min<int>(static_cast<int>(K), max_cap_iters);
        for (int round = 0; round < rounds; ++round) {
            std::size_t worst_k = K;
            double worst_over = 1e-12;
            for (std::size_t k = 0; k < K; ++k)
                if (!capped[k] && alloc.rates[k] > cap * (1 + worst_over))
                    worst_over = alloc.rates[k] / cap - 1, worst_k = k;
            if (worst_k == K) break;
            capped[worst_k] = 1;
            out.cap_iterations = round + 1;
            // Pin every capped user, then re-solve the rest on what is left.
            double used_p = 0, used_n = 0;
            for (std::size_t k = 0; k < K; ++k)
                if (capped[k]) {
                    if (alloc.rates[k] > cap)  // first pin sheds surplus codes
                        alloc.codes[k] *= cap / alloc.rates[k];
                    alloc.powers[k] = detail::power_for_rate(
                        base, k, alloc.codes[k], cap);
                    alloc.rates[k] = cap;
                    used_p += alloc.powers[k];
                    used_n += alloc.codes[k];
                }
            WeightedInstance rest = base;
            rest.power_budget = std::max(0.0, base.power_budget - used_p);
            rest.n_max = std::max(0.0, base.n_max - used_n);
            bool any_free = false;
            for (std::size_t k = 0; k < K; ++k) {
                rest.weights[k] = capped[k] ? 0.0 : weights[k];
                any_free |= rest.weights[k] > 0;
            }
            if (!any_free) break;
            DataAllocation sub = solve_inner(rest, opt);
            last_beta = sub.beta;
            for (std::size_t k = 0; k < K; ++k)
                if (!capped[k]) {
                    alloc.powers[k] = sub.powers[k];
                    alloc.codes[k] = sub.codes[k];
                    alloc.rates[k] = sub.rates[k];
                }
        }
        for (std::size_t k = 0; k < K; ++k)
            if (capped[k] && alloc.codes[k] > 0) {
                const double x = std::exp(cap * base.m_d * detail::kLn2 /
                                          (alloc.codes[k] * base.chip_rate));
                const double dp_dr = detail::kLn2 * base.denom(k) * x /
                                     (base.chip_rate * base.gains[k]);
                out.eta[k] = std::max(0.0, weights[k] - last_beta * dp_dr);
            }
    } else {
        double total =
            std::accumulate(alloc.rates.begin(), alloc.rates.end(), 0.0);
        if (total > cap) {
            out.cap_iterations = 1;
            double lo = 0, hi = 1;
            for (int it = 0; it < 60; ++it) {
                const double t = 0.5 * (lo + hi);
                double sum = 0;
                for (std::size_t k = 0; k < K; ++k)
                    sum += rate_of(base, k, t * alloc.powers[k],
                                   alloc.codes[k]);
                (sum > cap ? hi : lo) = t;
            }
            for (std::size_t k = 0; k < K; ++k) {
                alloc.powers[k] *= lo;
                alloc.rates[k] = rate_of(base, k, alloc.powers[k],
                                         alloc.codes[k]);
            }
        }
    }

    alloc.objective = 0;
    for (std::size_t k = 0; k < K; ++k)
        alloc.objective += weights[k] * alloc.rates[k];
    out.alloc = std::move(alloc);
    return out;
}

}  // namespace ehsched
