#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ehsched/params.hpp"

namespace ehsched {

/// One weighted per-slot data scheduling instance:
///   maximize sum_k w_k r_k(p_k, n_k)
///   s.t. sum p_k <= power_budget, sum n_k <= n_max, p, n >= 0.
struct WeightedInstance {
    std::vector<double> weights;  // may be negative; such users get nothing
    std::vector<double> gains;
    double p_rad = 0;          // total radiated power, enters interference
    double power_budget = 0;   // watts for data traffic
    double n_max = 0;          // spreading codes for data traffic
    double chip_rate = 0;
    double m_d = 1;
    double theta = 0;
    double sigma2 = 0;

    std::size_t size() const { return weights.size(); }

    /// Interference-plus-noise density seen by user k per unit gain.
    double denom(std::size_t k) const {
        return theta * p_rad * gains[k] + sigma2;
    }
};

struct DataAllocation {
    std::vector<double> powers;
    std::vector<double> codes;
    std::vector<double> rates;
    double beta = 0;      // multiplier on the power budget
    double varphi = 0;    // multiplier on the code budget
    double objective = 0;
    int iterations = 0;
    bool converged = false;
    double stationarity_residual = 0;  // relative, over served users
};

/// Shannon-style rate of user k: n * (W / M_D) * log2(1 + SINR_per_code),
/// with SINR_per_code = M_D p h / (n * (theta p_rad h + sigma2)).
inline double rate_of(const WeightedInstance& inst, std::size_t k, double power,
                      double codes) {
    if (power <= 0 || codes <= 0) return 0;
    const double sinr =
        inst.m_d * power * inst.gains[k] / (codes * inst.denom(k));
    return codes * (inst.chip_rate / inst.m_d) * std::log2(1.0 + sinr);
}

namespace detail {

constexpr double kLn2 = 0.6931471805599453;

/// g(u) = ln(1+u) - u/(1+u); the code-marginal-utility curve in nats.
/// Strictly increasing from 0, unbounded.
inline double g_of_u(double u) {
    if (u < 1e-4) {
        // series: u^2/2 - 2u^3/3 + 3u^4/4
        return u * u * (0.5 + u * (-2.0 / 3.0 + 0.75 * u));
    }
    return std::log1p(u) - u / (1.0 + u);
}

/// Inverse of g_of_u by safeguarded Newton.
inline double u_of_g(double y) {
    if (y <= 0) return 0;
    double u = y < 0.3 ? std::sqrt(2.0 * y) : std::exp(y + 1.0);
    double lo = 0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100; ++it) {
        const double r = g_of_u(u) - y;
        if (r > 0)
            hi = u;
        else
            lo = u;
        const double d = u / ((1.0 + u) * (1.0 + u));  // g'(u)
        double next = u - r / d;
        if (!(next > lo && next < hi))
            next = std::isinf(hi) ? std::max(2.0 * u, 1.0) : 0.5 * (lo + hi);
        if (std::abs(next - u) <= 1e-14 * (1.0 + u)) return next;
        u = next;
    }
    return u;
}

}  // namespace detail

/// Closed-form power stationarity given codes and the power multiplier beta:
///   p_k = max{0, w_k n_k W / (ln2 beta M_D) - n_k D_k / (M_D h_k)}.
/// Users with w_k <= 0 or n_k <= 0 get zero.
inline std::vector<double> optimal_power_given_codes(
    const WeightedInstance& inst, const std::vector<double>& codes,
    double beta) {
    if (beta <= 0)
        throw std::invalid_argument(
            "optimal_power_given_codes: beta must be positive");
    if (codes.size() != inst.size())
        throw std::invalid_argument(
            "optimal_power_given_codes: codes size mismatch");
    std::vector<double> powers(inst.size(), 0.0);
    for (std::size_t k = 0; k < inst.size(); ++k) {
        if (inst.weights[k] <= 0 || codes[k] <= 0) continue;
        const double water =
            inst.weights[k] * inst.chip_rate / (detail::kLn2 * beta);
        const double cost = inst.denom(k) / inst.gains[k];
        powers[k] = std::max(0.0, codes[k] * (water - cost) / inst.m_d);
    }
    return powers;
}

struct CodesResult {
    std::vector<double> codes;
    bool converged = true;
    int iterations = 0;
};

/// Per-user code stationarity for fixed powers and code multiplier varphi.
/// The plain fixed-point map
///   n <- w W A / (ln2 (w W log2(1 + A/n) - M_D varphi)) - A,  A = M_D p h / D
/// is locally repelling at its root (slope 1 + SINR there), so each user is
/// solved by a bracketed false-position iteration on the map's displacement,
/// which has a sign change exactly at the stationary point. Users whose
/// denominator cannot stay positive (priced out by varphi) get zero codes.
inline CodesResult optimal_codes_fixed_point(const WeightedInstance& inst,
                                             const std::vector<double>& powers,
                                             const std::vector<double>& codes_init,
                                             double varphi, int max_iter = 100,
                                             double tol = 1e-12) {
    if (powers.size() != inst.size() || codes_init.size() != inst.size())
        throw std::invalid_argument(
            "optimal_codes_fixed_point: size mismatch");
    CodesResult out;
    out.codes.assign(inst.size(), 0.0);
    for (std::size_t k = 0; k < inst.size(); ++k) {
        const double w = inst.weights[k];
        if (w <= 0 || powers[k] <= 0) continue;
        const double a = inst.m_d * powers[k] * inst.gains[k] / inst.denom(k);
        const double ww = w * inst.chip_rate;

        // Upper end of the bracket: the map's denominator hits zero at
        // n_bar = A / (2^(M_D varphi / (w W)) - 1).
        const double expo = inst.m_d * varphi / ww;
        if (expo > 300) continue;  // priced out, stationary point under 1e-90
        if (expo <= 0) {
            // No finite stationary point; the literal iteration walks the
            // projection down to zero.
            out.converged = false;
            continue;
        }
        const double n_bar = a / std::expm1(expo * detail::kLn2);

        auto displacement = [&](double n) {
            const double den = ww * std::log2(1.0 + a / n) - inst.m_d * varphi;
            if (den <= 0) return std::numeric_limits<double>::infinity();
            return ww * a / (detail::kLn2 * den) - a - n;
        };

        double lo = n_bar * 1e-12, hi = n_bar * (1.0 - 1e-12);
        double flo = displacement(lo), fhi = displacement(hi);
        if (!(flo < 0) || !(fhi > 0)) {
            // Degenerate bracket (extreme magnitudes); fall back to the edge.
            out.codes[k] = flo >= 0 ? hi : 0.0;
            out.converged = false;
            continue;
        }
        // Illinois-damped false position on the bracket; the stop is on
        // bracket width, never on step size (a near-edge evaluation can
        // produce an arbitrarily small step while far from the root).
        int it = 0, side = 0;
        double n = std::clamp(codes_init[k] > 0 ? codes_init[k] : 0.5 * n_bar,
                              lo, hi);
        for (; it < max_iter; ++it) {
            const double f = displacement(n);
            if (f == 0) {
                lo = hi = n;
                break;
            }
            if (f > 0) {
                hi = n, fhi = f;
                if (side == +1 && std::isfinite(flo)) flo *= 0.5;
                side = +1;
            } else {
                lo = n, flo = f;
                if (side == -1 && std::isfinite(fhi)) fhi *= 0.5;
                side = -1;
            }
            if (hi - lo <= tol * std::max(1.0, lo)) break;
            double next;
            if (std::isfinite(fhi) && fhi - flo > 0) {
                next = (lo * fhi - hi * flo) / (fhi - flo);  // false position
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            } else {
                next = 0.5 * (lo + hi);
            }
            n = next;
        }
        out.iterations = std::max(out.iterations, it + 1);
        if (it == max_iter) out.converged = false;
        out.codes[k] = 0.5 * (lo + hi);
    }
    return out;
}

struct DualUpdateResult {
    double beta = 0;
    double varphi = 0;
    double viol_power = 0;  // sum p - budget
    double viol_codes = 0;  // sum n - n_max
};

/// Projected supergradient step on (beta, varphi) with the normalized
/// diminishing step nu = (Q / sqrt(q)) / ||(viol_p, viol_n)||_2.
inline DualUpdateResult update_inner_duals(const WeightedInstance& inst,
                                           const std::vector<double>& powers,
                                           const std::vector<double>& codes,
                                           double beta, double varphi, int q,
                                           double q_scale,
                                           double beta_min = 1e-12) {
    if (q < 1)
        throw std::invalid_argument("update_inner_duals: q must be >= 1");
    DualUpdateResult r;
    r.viol_power = std::accumulate(powers.begin(), powers.end(), 0.0) -
                   inst.power_budget;
    r.viol_codes =
        std::accumulate(codes.begin(), codes.end(), 0.0) - inst.n_max;
    const double norm = std::hypot(r.viol_power, r.viol_codes);
    if (norm > 0) {
        const double nu = q_scale / (std::sqrt(static_cast<double>(q)) * norm);
        r.beta = std::max(beta_min, beta + nu * r.viol_power);
        r.varphi = std::max(0.0, varphi + nu * r.viol_codes);
    } else {
        r.beta = std::max(beta_min, beta);
        r.varphi = std::max(0.0, varphi);
    }
    return r;
}

namespace detail {

/// Normalized view: budget and code pool scaled to 1, weights to max 1,
/// channel folded into one coefficient c_k per user (per-pool SNR).
struct ScaledProblem {
    std::vector<double> w;       // normalized weights, 0 for ineligible users
    std::vector<double> c;       // c_k = m_d h_k budget / (D_k n_max)
    std::vector<std::size_t> eligible;
    double w_max = 0;
    double obj_scale = 0;        // raw objective = obj_scale * scaled objective
};

inline ScaledProblem scale_problem(const WeightedInstance& inst) {
    ScaledProblem s;
    s.w.assign(inst.size(), 0.0);
    s.c.assign(inst.size(), 0.0);
    for (std::size_t k = 0; k < inst.size(); ++k)
        if (inst.weights[k] > 0)
            s.w_max = std::max(s.w_max, inst.weights[k]);
    if (s.w_max <= 0) return s;
    for (std::size_t k = 0; k < inst.size(); ++k) {
        if (inst.weights[k] <= 0) continue;
        s.w[k] = inst.weights[k] / s.w_max;
        s.c[k] = inst.m_d * inst.gains[k] * inst.power_budget /
                 (inst.denom(k) * inst.n_max);
        s.eligible.push_back(k);
    }
    s.obj_scale = s.w_max * inst.n_max * inst.chip_rate / inst.m_d;
    return s;
}

/// Scaled objective of a feasible normalized point (x = powers, m = codes).
inline double scaled_objective(const ScaledProblem& s,
                               const std::vector<double>& x,
                               const std::vector<double>& m) {
    double obj = 0;
    for (std::size_t k = 0; k < s.w.size(); ++k)
        if (m[k] > 0 && x[k] > 0)
            obj += s.w[k] * m[k] * std::log2(1.0 + s.c[k] * x[k] / m[k]);
    return obj;
}

/// Exact water-filling of the unit power budget over a fixed code profile m
/// (sum m = 1): x_k = m_k (w_k / (ln2 beta) - 1/c_k)^+ with beta chosen so
/// the budget is met with equality. Returns beta; x is written in place.
inline double water_fill(const ScaledProblem& s, const std::vector<double>& m,
                         std::vector<double>& x) {
    struct Entry {
        std::size_t k;
        double a;  // activation level w_k c_k / ln2
    };
    std::vector<Entry> order;
    for (std::size_t k : s.eligible)
        if (m[k] > 0) order.push_back({k, s.w[k] * s.c[k] / kLn2});
    x.assign(s.w.size(), 0.0);
    if (order.empty()) return 0;
    std::sort(order.begin(), order.end(),
              [](const Entry& a, const Entry& b) { return a.a > b.a; });
    double num = 0, den = 1.0;  // beta = num / den over the active prefix
    double beta = 0;
    std::size_t active = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t k = order[i].k;
        num += m[k] * s.w[k] / kLn2;
        den += m[k] / s.c[k];
        const double cand = num / den;
        // Valid once every included user stays active and the next does not.
        if (cand <= order[i].a &&
            (i + 1 == order.size() || cand >= order[i + 1].a)) {
            beta = cand;
            active = i + 1;
            break;
        }
    }
    if (beta <= 0) {  // numerical fallback: include everyone
        beta = num / den;
        active = order.size();
    }
    for (std::size_t i = 0; i < active; ++i) {
        const std::size_t k = order[i].k;
        x[k] = std::max(0.0, m[k] * (s.w[k] / (kLn2 * beta) - 1.0 / s.c[k]));
    }
    return beta;
}

struct Candidate {
    std::vector<double> m;  // code profile, sum = 1 over support
    double objective = -std::numeric_limits<double>::infinity();
    int support = 0;
};

/// Finalizes a code profile: normalize to the full code pool, water-fill the
/// power budget, and drop users left without power. Returns the achieved
/// scaled objective together with the allocation and its beta.
inline bool finalize_profile(const ScaledProblem& s, std::vector<double> m,
                             std::vector<double>& x_out,
                             std::vector<double>& m_out, double& beta_out,
                             double& obj_out) {
    for (int round = 0; round < 1 + static_cast<int>(s.eligible.size());
         ++round) {
        double total = std::accumulate(m.begin(), m.end(), 0.0);
        if (total <= 0) return false;
        for (double& v : m) v = std::max(0.0, v / total);
        std::vector<double> x;
        const double beta = water_fill(s, m, x);
        bool dropped = false;
        for (std::size_t k = 0; k < m.size(); ++k)
            if (m[k] > 0 && x[k] <= 0) {
                m[k] = 0;
                dropped = true;
            }
        if (!dropped) {
            x_out = std::move(x);
            m_out = std::move(m);
            beta_out = beta;
            obj_out = scaled_objective(s, x_out, m_out);
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Solves one weighted instance with the projected-supergradient dual loop
/// (normalized internally so the default step scale works across weight
/// magnitudes), keeps the best feasible iterate met along the way, and
/// finishes with an exact stationarity polish of the small candidate active
/// sets the loop surfaces. Both budgets are met with equality whenever some
/// weight is positive and the budget is positive.
inline DataAllocation solve_inner(const WeightedInstance& inst,
                                  const SolverOptions& opt = {}) {
    const std::size_t K = inst.size();
    if (inst.gains.size() != K)
        throw std::invalid_argument("solve_inner: gains/weights size mismatch");
    for (double h : inst.gains)
        if (h <= 0)
            throw std::invalid_argument("solve_inner: gains must be positive");

    DataAllocation out;
    out.powers.assign(K, 0.0);
    out.codes.assign(K, 0.0);
    out.rates.assign(K, 0.0);
    out.beta = opt.beta_min;
    out.converged = true;

    const detail::ScaledProblem s = detail::scale_problem(inst);
    if (s.eligible.empty() || inst.power_budget <= 0 || inst.n_max <= 0)
        return out;

    WeightedInstance norm;  // rescaled instance the dual loop works on
    norm.weights = s.w;
    norm.gains = s.c;
    norm.p_rad = 0;
    norm.power_budget = 1;
    norm.n_max = 1;
    norm.chip_rate = 1;
    norm.m_d = 1;
    norm.theta = 0;
    norm.sigma2 = 1;

    // Best single-user vertex seeds the duals: beta and varphi that make
    // that user exactly stationary at full budget and full code pool.
    std::size_t k_seed = s.eligible.front();
    double seed_obj = -1;
    for (std::size_t k : s.eligible) {
        const double v = s.w[k] * std::log2(1.0 + s.c[k]);
        if (v > seed_obj) {
            seed_obj = v;
            k_seed = k;
        }
    }
    double beta = opt.beta_init > 0
                      ? opt.beta_init
                      : s.w[k_seed] * s.c[k_seed] /
                            (detail::kLn2 * (1.0 + s.c[k_seed]));
    double varphi = opt.varphi_init >= 0
                        ? opt.varphi_init
                        : s.w[k_seed] * detail::g_of_u(s.c[k_seed]) /
                              detail::kLn2;
    beta = std::max(beta, opt.beta_min);

    detail::Candidate best;
    std::vector<double> m(K, 0.0), x(K, 0.0);

    double q_scale = opt.q_scale;
    int q_local = 0;
    int flips = 0;
    double prev_sign_p = 0, prev_sign_n = 0;
    int q_total = 0;

    while (q_total < opt.max_outer) {
        ++q_total;
        ++q_local;

        // Primal probe: equal-split init over affordable users, then a few
        // alternating passes. The alternation is geometric along per-user
        // rays, so extra passes only sharpen the ranking; each probe is
        // rescaled into a feasible candidate via degree-1 homogeneity.
        std::vector<std::size_t> afford;
        for (std::size_t k : s.eligible)
            if (s.w[k] * s.c[k] / detail::kLn2 > beta) afford.push_back(k);
        std::fill(m.begin(), m.end(), 0.0);
        std::fill(x.begin(), x.end(), 0.0);
        if (!afford.empty()) {
            for (std::size_t k : afford) m[k] = 1.0 / afford.size();
            const int passes = std::min(opt.max_inner, 6);
            for (int pass = 0; pass < passes; ++pass) {
                x = optimal_power_given_codes(norm, m, beta);
                CodesResult cr = optimal_codes_fixed_point(norm, x, m, varphi,
                                                           100, 1e-10);
                double rel = 0;
                for (std::size_t k = 0; k < K; ++k) {
                    if (m[k] > 0 || cr.codes[k] > 0)
                        rel = std::max(rel, std::abs(cr.codes[k] - m[k]) /
                                                std::max(m[k], cr.codes[k]));
                    m[k] = cr.codes[k];
                }
                double total = std::accumulate(m.begin(), m.end(), 0.0);
                if (total <= 0) break;
                if (total > 1e6 || total < 1e-6)  // homogeneous rescale guard
                    for (double& v : m) v /= total;
                if (rel < opt.tol_primal) break;
            }
            x = optimal_power_given_codes(norm, m, beta);

            const double sum_x = std::accumulate(x.begin(), x.end(), 0.0);
            const double sum_m = std::accumulate(m.begin(), m.end(), 0.0);
            if (sum_x > 0 && sum_m > 0) {
                const double t = std::min(1.0 / sum_x, 1.0 / sum_m);
                const double obj = t * detail::scaled_objective(s, x, m);
                if (obj > best.objective) {
                    best.objective = obj;
                    best.m = m;
                    best.support = 0;
                    for (double v : m)
                        if (v > 0) ++best.support;
                }
            }
        }

        const DualUpdateResult du = update_inner_duals(
            norm, x, m, beta, varphi, q_local, q_scale, opt.beta_min);
        beta = du.beta;
        varphi = du.varphi;

        const double sp = du.viol_power > 0 ? 1.0 : -1.0;
        const double sn = du.viol_codes > 0 ? 1.0 : -1.0;
        if (q_local > 1 && (sp != prev_sign_p || sn != prev_sign_n)) ++flips;
        prev_sign_p = sp;
        prev_sign_n = sn;
        if (flips >= 4) {  // oscillating around the optimum: refine the step
            q_scale *= 0.5;
            q_local = 0;
            flips = 0;
        }
        if (q_scale < 1e-8 * opt.q_scale) break;
    }
    out.iterations = q_total;

    // Candidate polish: every single-user vertex, two-user active sets among
    // the strongest users, the loop's best iterate, and the equal split over
    // all eligible users (exact for symmetric ties).
    std::vector<detail::Candidate> cands;
    if (best.support > 0) cands.push_back(best);
    {
        detail::Candidate eq;
        eq.m.assign(K, 0.0);
        for (std::size_t k : s.eligible) eq.m[k] = 1.0 / s.eligible.size();
        eq.support = static_cast<int>(s.eligible.size());
        cands.push_back(eq);
    }
    for (std::size_t k : s.eligible) {
        detail::Candidate c;
        c.m.assign(K, 0.0);
        c.m[k] = 1.0;
        c.support = 1;
        cands.push_back(c);
    }
    // Two-user stationary pairs: common beta solving
    //   w_i g(u_i(beta)) = w_j g(u_j(beta)),  u_k(beta) = a_k / beta - 1,
    // then the unique split meeting both budgets, if it lands in [0, 1].
    std::vector<std::size_t> ranked = s.eligible;
    std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        return s.w[a] * std::log2(1.0 + s.c[a]) >
               s.w[b] * std::log2(1.0 + s.c[b]);
    });
    if (ranked.size() > 8) ranked.resize(8);
    for (std::size_t i = 0; i + 1 < ranked.size(); ++i) {
        for (std::size_t j = i + 1; j < ranked.size(); ++j) {
            const std::size_t ki = ranked[i], kj = ranked[j];
            const double ai = s.w[ki] * s.c[ki] / detail::kLn2;
            const double aj = s.w[kj] * s.c[kj] / detail::kLn2;
            const double hi_b = std::min(ai, aj);
            auto balance = [&](double b) {
                const double ui = ai / b - 1.0, uj = aj / b - 1.0;
                return s.w[ki] * detail::g_of_u(ui) -
                       s.w[kj] * detail::g_of_u(uj);
            };
            double lo = hi_b * 1e-9, hi = hi_b * (1.0 - 1e-9);
            double flo = balance(lo), fhi = balance(hi);
            if (flo == 0 || fhi == 0 || (flo < 0) == (fhi < 0)) continue;
            for (int it = 0; it < 200; ++it) {
                const double mid = std::sqrt(lo * hi);
                const double fm = balance(mid);
                if ((fm < 0) == (flo < 0))
                    lo = mid, flo = fm;
                else
                    hi = mid, fhi = fm;
                if (hi - lo <= 1e-14 * hi) break;
            }
            const double b = 0.5 * (lo + hi);
            const double rho_i = (ai / b - 1.0) / s.c[ki];
            const double rho_j = (aj / b - 1.0) / s.c[kj];
            if (std::abs(rho_i - rho_j) < 1e-30) continue;
            const double mi = (1.0 - rho_j) / (rho_i - rho_j);
            if (mi < 0 || mi > 1) continue;
            detail::Candidate c;
            c.m.assign(K, 0.0);
            c.m[ki] = mi;
            c.m[kj] = 1.0 - mi;
            c.support = (mi > 0) + (mi < 1);
            cands.push_back(c);
        }
    }

    std::vector<double> best_x, best_m;
    double best_beta = 0, best_obj = -1;
    int best_support = 0;
    for (detail::Candidate& c : cands) {
        std::vector<double> cx, cm;
        double cbeta = 0, cobj = 0;
        if (!detail::finalize_profile(s, c.m, cx, cm, cbeta, cobj)) continue;
        int support = 0;
        for (double v : cm)
            if (v > 0) ++support;
        const bool better =
            cobj > best_obj * (1.0 + 1e-12) ||
            (cobj >= best_obj * (1.0 - 1e-12) && support > best_support);
        if (better) {
            best_obj = cobj;
            best_x = std::move(cx);
            best_m = std::move(cm);
            best_beta = cbeta;
            best_support = support;
        }
    }
    if (best_obj <= 0) return out;  // nothing serveable

    // Report the code multiplier implied by the final allocation, and its
    // internal consistency as the stationarity residual.
    double g_lo = std::numeric_limits<double>::infinity(), g_hi = 0;
    for (std::size_t k = 0; k < K; ++k) {
        if (best_m[k] <= 0 || best_x[k] <= 0) continue;
        const double u = s.c[k] * best_x[k] / best_m[k];
        const double gv = s.w[k] * detail::g_of_u(u) / detail::kLn2;
        g_lo = std::min(g_lo, gv);
        g_hi = std::max(g_hi, gv);
    }
    const double varphi_hat = 0.5 * (g_lo + g_hi);
    out.stationarity_residual =
        varphi_hat > 0 ? (g_hi - g_lo) / (2.0 * varphi_hat) : 0.0;
    out.converged = out.stationarity_residual <= std::max(100.0 * opt.tol_dual, 1e-10);

    for (std::size_t k = 0; k < K; ++k) {
        out.powers[k] = best_x[k] * inst.power_budget;
        out.codes[k] = best_m[k] * inst.n_max;
        out.rates[k] = rate_of(inst, k, out.powers[k], out.codes[k]);
        if (inst.weights[k] > 0) out.objective += inst.weights[k] * out.rates[k];
    }
    out.beta = best_beta * s.obj_scale / inst.power_budget;
    out.varphi = varphi_hat * s.obj_scale / inst.n_max;
    return out;
}

/// Reporting-only integer code profile: floor each user's codes, then hand
/// leftover whole codes one at a time to whichever user gains the most
/// weighted rate. Powers stay fixed; never used inside the solve path.
inline std::vector<double> round_codes(const WeightedInstance& inst,
                                       const std::vector<double>& powers,
                                       const std::vector<double>& codes) {
    const std::size_t K = inst.size();
    std::vector<double> n(K);
    double used = 0;
    for (std::size_t k = 0; k < K; ++k) {
        n[k] = std::floor(codes[k]);
        used += n[k];
    }
    long left = static_cast<long>(std::floor(inst.n_max) - used);
    while (left-- > 0) {
        std::size_t pick = K;
        double best_gain = 0;
        for (std::size_t k = 0; k < K; ++k) {
            if (inst.weights[k] <= 0 || powers[k] <= 0) continue;
            const double gain =
                inst.weights[k] * (rate_of(inst, k, powers[k], n[k] + 1) -
                                   rate_of(inst, k, powers[k], n[k]));
            if (gain > best_gain) {
                best_gain = gain;
                pick = k;
            }
        }
        if (pick == K) break;
        n[pick] += 1;
    }
    return n;
}

}  // namespace ehsched
