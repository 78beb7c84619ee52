#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ehsched/inner_solver.hpp"
#include "ehsched/rng.hpp"

namespace ehsched {

/// Data rate written straight from the SINR definition, kept independent of
/// the solver's rate_of on purpose so the two can cross-check each other.
inline double oracle_rate(double chip_rate, double m_d, double theta,
                          double sigma2, double p_rad, double gain,
                          double power, double codes) {
    if (codes <= 0 || power <= 0) return 0;
    const double interference = theta * p_rad * gain + sigma2;
    const double sinr_per_code = m_d * power * gain / (codes * interference);
    return codes * (chip_rate / m_d) * std::log2(1.0 + sinr_per_code);
}

struct VoiceSinr {
    double approx = 0;  // own power counted inside the orthogonality loss
    double exact = 0;   // own power excluded from the interference
};

/// Voice SINR evaluated both ways for a user radiating `power` out of the
/// total `p_rad`.
inline VoiceSinr voice_sinr_direct(double power, double gain, double p_rad,
                                   double m_v, double theta, double sigma2) {
    if (power < 0 || power > p_rad)
        throw std::invalid_argument(
            "voice_sinr_direct: power must lie in [0, p_rad]");
    VoiceSinr s;
    s.approx = m_v * power * gain / (theta * p_rad * gain + sigma2);
    s.exact = m_v * power * gain / (theta * (p_rad - power) * gain + sigma2);
    return s;
}

struct GridSpec {
    int power_points = 200;
    int code_points = 41;
};

struct GridResult {
    std::vector<double> powers;
    std::vector<double> codes;
    double objective = 0;
};

/// Exhaustive grid search over the feasible simplex slices for one- or
/// two-user instances. Slow by design; exists to referee the solver.
inline GridResult brute_force_inner(const WeightedInstance& inst,
                                    const GridSpec& grid) {
    const std::size_t K = inst.size();
    if (K == 0 || K > 2)
        throw std::invalid_argument(
            "brute_force_inner: only 1- or 2-user instances supported");
    if (grid.power_points < 2 || grid.code_points < 2)
        throw std::invalid_argument("brute_force_inner: grid too small");

    const double P = inst.power_budget;
    const double N = inst.n_max;
    auto value = [&](double p1, double n1, double p2, double n2) {
        double v = inst.weights[0] * oracle_rate(inst.chip_rate, inst.m_d,
                                                 inst.theta, inst.sigma2,
                                                 inst.p_rad, inst.gains[0], p1,
                                                 n1);
        if (K == 2)
            v += inst.weights[1] * oracle_rate(inst.chip_rate, inst.m_d,
                                               inst.theta, inst.sigma2,
                                               inst.p_rad, inst.gains[1], p2,
                                               n2);
        return v;
    };

    GridResult best;
    best.powers.assign(K, 0.0);
    best.codes.assign(K, 0.0);
    best.objective = value(0, 0, 0, 0);

    const int np = grid.power_points;
    const int nn = grid.code_points;
    for (int ip1 = 0; ip1 < np; ++ip1) {
        const double p1 = P * ip1 / (np - 1);
        const int np2 = K == 2 ? np : 1;
        for (int ip2 = 0; ip2 < np2; ++ip2) {
            const double p2 = K == 2 ? (P - p1) * ip2 / (np - 1) : 0.0;
            for (int in1 = 0; in1 < nn; ++in1) {
                const double n1 = N * in1 / (nn - 1);
                const int nn2 = K == 2 ? nn : 1;
                for (int in2 = 0; in2 < nn2; ++in2) {
                    const double n2 = K == 2 ? (N - n1) * in2 / (nn - 1) : 0.0;
                    const double v = value(p1, n1, p2, n2);
                    if (v > best.objective) {
                        best.objective = v;
                        best.powers[0] = p1;
                        best.codes[0] = n1;
                        if (K == 2) {
                            best.powers[1] = p2;
                            best.codes[1] = n2;
                        }
                    }
                }
            }
        }
    }
    return best;
}

struct KktReport {
    double max_stationarity = 0;  // worst relative residual at interior coords
    double comp_slack_power = 0;  // |beta * (sum p - budget)|
    double comp_slack_codes = 0;  // |varphi * (sum n - n_max)|
};

/// Finite-difference KKT audit of an allocation against reported duals.
/// Residuals are relative: |w dr/dx - multiplier| / max(multiplier, |w dr/dx|).
/// Throws if the allocation is infeasible.
inline KktReport kkt_report(const WeightedInstance& inst,
                            const std::vector<double>& powers,
                            const std::vector<double>& codes, double beta,
                            double varphi, double fd_rel = 1e-6) {
    if (powers.size() != inst.size() || codes.size() != inst.size())
        throw std::invalid_argument("kkt_report: size mismatch");
    double sum_p = 0, sum_n = 0;
    for (std::size_t k = 0; k < inst.size(); ++k) {
        if (powers[k] < -1e-12 || codes[k] < -1e-12)
            throw std::invalid_argument("kkt_report: negative allocation");
        sum_p += powers[k];
        sum_n += codes[k];
    }
    if (sum_p > inst.power_budget * (1 + 1e-9) + 1e-18 ||
        sum_n > inst.n_max * (1 + 1e-9))
        throw std::invalid_argument("kkt_report: allocation exceeds a budget");

    KktReport rep;
    rep.comp_slack_power = std::abs(beta * (sum_p - inst.power_budget));
    rep.comp_slack_codes = std::abs(varphi * (sum_n - inst.n_max));

    auto weighted_rate = [&](std::size_t k, double p, double n) {
        return inst.weights[k] * oracle_rate(inst.chip_rate, inst.m_d,
                                             inst.theta, inst.sigma2,
                                             inst.p_rad, inst.gains[k], p, n);
    };
    for (std::size_t k = 0; k < inst.size(); ++k) {
        if (inst.weights[k] <= 0) continue;
        const bool p_interior = powers[k] > 1e-7 * inst.power_budget;
        const bool n_interior = codes[k] > 1e-7 * inst.n_max;
        if (p_interior && n_interior) {
            const double dp = fd_rel * powers[k];
            const double gp = (weighted_rate(k, powers[k] + dp, codes[k]) -
                               weighted_rate(k, powers[k] - dp, codes[k])) /
                              (2 * dp);
            const double rp =
                std::abs(gp - beta) / std::max({beta, std::abs(gp), 1e-300});
            const double dn = fd_rel * codes[k];
            const double gn = (weighted_rate(k, powers[k], codes[k] + dn) -
                               weighted_rate(k, powers[k], codes[k] - dn)) /
                              (2 * dn);
            const double rn = std::abs(gn - varphi) /
                              std::max({varphi, std::abs(gn), 1e-300});
            rep.max_stationarity = std::max({rep.max_stationarity, rp, rn});
        }
    }
    return rep;
}

/// Seeded random instance with the radio constants of the shipped configs and
/// log-uniform weights and gains; exercises the solver across channel spreads.
inline WeightedInstance random_instance(Rng& rng, int users) {
    WeightedInstance inst;
    inst.p_rad = 10e-3;
    inst.power_budget = 5e-3;
    inst.n_max = 15;
    inst.chip_rate = 3.84e6;
    inst.m_d = 16;
    inst.theta = 0.35;
    inst.sigma2 = std::pow(10.0, -13.2);
    auto log_uniform = [&](double lo, double hi) {
        return lo * std::exp(uniform01(rng) * std::log(hi / lo));
    };
    for (int k = 0; k < users; ++k) {
        inst.weights.push_back(log_uniform(0.1, 10.0));
        inst.gains.push_back(log_uniform(1e-12, 1e-10));
    }
    return inst;
}

}  // namespace ehsched
