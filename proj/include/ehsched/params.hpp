#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ehsched/units.hpp"

namespace ehsched {

/// Piecewise-constant harvest probability: entries are (first_slot, prob)
/// sorted by slot; prob of the last entry whose first_slot <= t applies.
struct HarvestSchedule {
    std::vector<std::pair<long, double>> entries{{0, 0.0}};

    double at(long slot) const {
        double p = entries.front().second;
        for (const auto& [start, prob] : entries) {
            if (start > slot) break;
            p = prob;
        }
        return p;
    }
};

enum class AdmissionPolicy { DropWorst, ScaleGamma };

struct SolverOptions {
    double tol_primal = 1e-6;   // relative change cutoff, inner primal loop
    double tol_dual = 1e-6;     // stationarity residual cutoff, dual loop
    int max_inner = 500;
    int max_outer = 2000;
    double q_scale = 1.0;       // Q in the step rule Q / sqrt(q)
    double beta_min = 1e-12;
    double beta_init = 0.0;     // <= 0 selects the data-driven default
    double varphi_init = -1.0;  // < 0 selects the data-driven default
};

struct SystemParams {
    int num_voice_users = 0;
    int num_data_users = 0;

    // Radio and power model, SI units (W, J, s, Hz, bit/s).
    double p_bs_max = 0;    // traffic power ceiling
    double p_cpich = 0;     // pilot power
    double p_fixed = 0;     // fixed circuitry draw
    double n_max = 0;       // data channelization codes
    double theta = 0;       // downlink orthogonality loss factor
    double m_v = 0;         // voice spreading factor
    double m_d = 0;         // data spreading factor
    double gamma = 0;       // voice target SINR, linear
    double sigma2 = 0;      // receiver noise power
    double chip_rate = 0;

    // Energy model.
    double b_max = 0;
    double b_init = 0;
    double packet_energy = 0;
    double alpha = 0;       // max battery fraction drawable per slot
    double slot_duration = 0;
    HarvestSchedule harvest;

    // Backhaul and outer-loop updates.
    double r_bh = 0;        // total backhaul rate
    double r_bh_voice = 0;  // backhaul reserved for voice
    double xi = 1.2;        // backhaul sharing safety factor
    double epsilon = 0;     // stochastic dual step size

    // Channel geometry.
    std::vector<double> voice_distances;  // meters
    std::vector<double> data_distances;
    double path_loss_exponent = 0;
    double path_loss_ref_db = 0;
    double path_loss_ref_distance = 1.0;
    double fading_correlation = 0.0;

    AdmissionPolicy admission = AdmissionPolicy::DropWorst;
    double gamma_scale_step = 0.5;
    double gamma_floor_factor = 0.25;
    int voice_period_slots = 1;

    std::uint64_t seed = 1;
    SolverOptions solver;
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        out.emplace_back(trim(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

[[noreturn]] inline void reject(const std::string& key, const std::string& got,
                                const std::string& expected) {
    throw std::invalid_argument("config key '" + key + "' = '" + got +
                                "': " + expected);
}

class KeyValueDoc {
  public:
    explicit KeyValueDoc(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string_view stripped = trim(line);
            if (stripped.empty() || stripped.front() == '#') continue;
            const std::size_t eq = stripped.find('=');
            if (eq == std::string_view::npos)
                throw std::invalid_argument(
                    "config line " + std::to_string(lineno) +
                    ": expected 'key = value', got '" + std::string(stripped) +
                    "'");
            std::string key{trim(stripped.substr(0, eq))};
            std::string value{trim(stripped.substr(eq + 1))};
            if (key.empty())
                throw std::invalid_argument("config line " +
                                            std::to_string(lineno) +
                                            ": empty key");
            if (!values_.emplace(key, value).second)
                throw std::invalid_argument("config key '" + key +
                                            "' appears more than once");
        }
    }

    const std::string* find(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return nullptr;
        consumed_.insert(key);
        return &it->second;
    }

    const std::string& require(const std::string& key) {
        const std::string* v = find(key);
        if (!v)
            throw std::invalid_argument("config is missing required key '" +
                                        key + "'");
        return *v;
    }

    void reject_unknown() const {
        for (const auto& [key, value] : values_)
            if (!consumed_.contains(key))
                throw std::invalid_argument("unknown config key '" + key +
                                            "'");
    }

  private:
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

inline HarvestSchedule parse_harvest_schedule(const std::string& text,
                                              const std::string& key) {
    HarvestSchedule sched;
    sched.entries.clear();
    for (const std::string& item : split_list(text)) {
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            reject(key, text, "entries must look like 'first_slot:prob'");
        const double slot = parse_number(item.substr(0, colon), key);
        const double prob = parse_number(item.substr(colon + 1), key);
        if (slot < 0 || slot != static_cast<long>(slot))
            reject(key, item, "first_slot must be a nonnegative integer");
        if (prob < 0.0 || prob > 1.0)
            reject(key, item, "probability must be in [0, 1]");
        sched.entries.emplace_back(static_cast<long>(slot), prob);
    }
    if (sched.entries.empty() || sched.entries.front().first != 0)
        reject(key, text, "schedule must start at slot 0");
    if (!std::is_sorted(sched.entries.begin(), sched.entries.end(),
                        [](const auto& a, const auto& b) {
                            return a.first < b.first;
                        }))
        reject(key, text, "entries must be sorted by first_slot");
    return sched;
}

}  // namespace detail

/// Parses and validates a flat key-value config document.
/// Unknown keys, missing keys, duplicates, and out-of-range values all throw
/// std::invalid_argument with a message naming the key.
inline SystemParams load_params(std::string_view text) {
    using detail::reject;
    detail::KeyValueDoc doc{text};
    SystemParams p;

    const double voice_users = parse_number(doc.require("voice_users"), "voice_users");
    const double data_users = parse_number(doc.require("data_users"), "data_users");
    if (voice_users < 0 || voice_users != static_cast<int>(voice_users))
        reject("voice_users", doc.require("voice_users"), "must be a nonnegative integer");
    if (data_users < 1 || data_users != static_cast<int>(data_users))
        reject("data_users", doc.require("data_users"), "must be a positive integer");
    p.num_voice_users = static_cast<int>(voice_users);
    p.num_data_users = static_cast<int>(data_users);

    p.p_bs_max = parse_power(doc.require("p_bs_max"), "p_bs_max");
    p.p_cpich = parse_power(doc.require("p_cpich"), "p_cpich");
    p.p_fixed = parse_power(doc.require("p_fixed"), "p_fixed");
    p.sigma2 = parse_power(doc.require("sigma2"), "sigma2");
    for (auto [key, value] : {std::pair<const char*, double>{"p_bs_max", p.p_bs_max},
                              {"p_cpich", p.p_cpich},
                              {"p_fixed", p.p_fixed},
                              {"sigma2", p.sigma2}})
        if (value <= 0) reject(key, doc.require(key), "must be positive");

    p.n_max = parse_number(doc.require("n_max"), "n_max");
    if (p.n_max <= 0) reject("n_max", doc.require("n_max"), "must be positive");

    p.theta = parse_number(doc.require("theta"), "theta");
    if (p.theta < 0 || p.theta > 1)
        reject("theta", doc.require("theta"), "must be in [0, 1]");

    p.m_v = parse_number(doc.require("m_v"), "m_v");
    p.m_d = parse_number(doc.require("m_d"), "m_d");
    if (p.m_v < 1) reject("m_v", doc.require("m_v"), "must be >= 1");
    if (p.m_d < 1) reject("m_d", doc.require("m_d"), "must be >= 1");

    const std::string* gamma = doc.find("gamma");
    const std::string* gamma_over_mv = doc.find("gamma_over_mv");
    if ((gamma != nullptr) == (gamma_over_mv != nullptr))
        throw std::invalid_argument(
            "config must set exactly one of 'gamma' and 'gamma_over_mv'");
    p.gamma = gamma ? parse_gain(*gamma, "gamma")
                    : p.m_v * parse_gain(*gamma_over_mv, "gamma_over_mv");
    if (p.gamma <= 0)
        reject(gamma ? "gamma" : "gamma_over_mv",
               gamma ? *gamma : *gamma_over_mv, "must be positive");
    if (p.num_voice_users > 0 &&
        p.m_v <= p.num_voice_users * p.theta * p.gamma)
        throw std::invalid_argument(
            "infeasible voice load: m_v must exceed voice_users * theta * "
            "gamma or no channel state can serve every voice user");

    p.chip_rate = parse_frequency(doc.require("chip_rate"), "chip_rate");
    if (p.chip_rate <= 0)
        reject("chip_rate", doc.require("chip_rate"), "must be positive");

    p.b_max = parse_energy(doc.require("b_max"), "b_max");
    if (p.b_max <= 0) reject("b_max", doc.require("b_max"), "must be positive");
    if (const std::string* v = doc.find("b_init")) {
        p.b_init = parse_energy(*v, "b_init");
        if (p.b_init < 0 || p.b_init > p.b_max)
            reject("b_init", *v, "must be in [0, b_max]");
    } else {
        p.b_init = p.b_max;
    }

    p.packet_energy = parse_energy(doc.require("packet_energy"), "packet_energy");
    if (p.packet_energy < 0)
        reject("packet_energy", doc.require("packet_energy"), "must be nonnegative");

    p.alpha = parse_number(doc.require("alpha"), "alpha");
    if (p.alpha <= 0 || p.alpha > 1)
        reject("alpha", doc.require("alpha"), "must be in (0, 1]");

    p.slot_duration = parse_time(doc.require("slot_duration"), "slot_duration");
    if (p.slot_duration <= 0)
        reject("slot_duration", doc.require("slot_duration"), "must be positive");

    const std::string* prob = doc.find("harvest_prob");
    const std::string* sched = doc.find("harvest_schedule");
    if ((prob != nullptr) == (sched != nullptr))
        throw std::invalid_argument(
            "config must set exactly one of 'harvest_prob' and "
            "'harvest_schedule'");
    if (prob) {
        const double pr = parse_number(*prob, "harvest_prob");
        if (pr < 0 || pr > 1) reject("harvest_prob", *prob, "must be in [0, 1]");
        p.harvest.entries = {{0, pr}};
    } else {
        p.harvest = detail::parse_harvest_schedule(*sched, "harvest_schedule");
    }

    p.r_bh = parse_rate(doc.require("r_bh"), "r_bh");
    p.r_bh_voice = parse_rate(doc.require("r_bh_voice"), "r_bh_voice");
    if (p.r_bh_voice < 0)
        reject("r_bh_voice", doc.require("r_bh_voice"), "must be nonnegative");
    if (p.r_bh <= p.r_bh_voice)
        reject("r_bh", doc.require("r_bh"), "must exceed r_bh_voice");

    if (const std::string* v = doc.find("xi")) {
        p.xi = parse_number(*v, "xi");
        if (p.xi < 1) reject("xi", *v, "must be >= 1");
    }

    p.epsilon = parse_number(doc.require("epsilon"), "epsilon");
    if (p.epsilon <= 0) reject("epsilon", doc.require("epsilon"), "must be positive");

    auto parse_distances = [&](const char* key, int expected) {
        std::vector<double> out;
        if (expected == 0) {
            if (const std::string* v = doc.find(key); v && !trim(*v).empty())
                reject(key, *v, "must be empty when the user count is zero");
            return out;
        }
        const std::string& v = doc.require(key);
        for (const std::string& item : detail::split_list(v)) {
            const double d = parse_number(item, key);
            if (d <= 0) reject(key, v, "distances must be positive");
            out.push_back(d);
        }
        if (static_cast<int>(out.size()) != expected)
            reject(key, v, "expected " + std::to_string(expected) + " entries");
        return out;
    };
    p.voice_distances = parse_distances("voice_distances", p.num_voice_users);
    p.data_distances = parse_distances("data_distances", p.num_data_users);

    p.path_loss_exponent = parse_number(doc.require("path_loss_exponent"),
                                        "path_loss_exponent");
    if (p.path_loss_exponent <= 0)
        reject("path_loss_exponent", doc.require("path_loss_exponent"),
               "must be positive");
    p.path_loss_ref_db = parse_number(doc.require("path_loss_ref_db"),
                                      "path_loss_ref_db");
    if (const std::string* v = doc.find("path_loss_ref_distance")) {
        p.path_loss_ref_distance = parse_number(*v, "path_loss_ref_distance");
        if (p.path_loss_ref_distance <= 0)
            reject("path_loss_ref_distance", *v, "must be positive");
    }

    if (const std::string* v = doc.find("fading_correlation")) {
        p.fading_correlation = parse_number(*v, "fading_correlation");
        if (p.fading_correlation < 0 || p.fading_correlation >= 1)
            reject("fading_correlation", *v, "must be in [0, 1)");
    }

    if (const std::string* v = doc.find("admission")) {
        if (*v == "drop_worst")
            p.admission = AdmissionPolicy::DropWorst;
        else if (*v == "scale_gamma")
            p.admission = AdmissionPolicy::ScaleGamma;
        else
            reject("admission", *v, "must be 'drop_worst' or 'scale_gamma'");
    }
    if (const std::string* v = doc.find("gamma_scale_step")) {
        p.gamma_scale_step = parse_number(*v, "gamma_scale_step");
        if (p.gamma_scale_step <= 0 || p.gamma_scale_step >= 1)
            reject("gamma_scale_step", *v, "must be in (0, 1)");
    }
    if (const std::string* v = doc.find("gamma_floor_factor")) {
        p.gamma_floor_factor = parse_number(*v, "gamma_floor_factor");
        if (p.gamma_floor_factor <= 0 || p.gamma_floor_factor > 1)
            reject("gamma_floor_factor", *v, "must be in (0, 1]");
    }
    if (const std::string* v = doc.find("voice_period_slots")) {
        const double n = parse_number(*v, "voice_period_slots");
        if (n < 1 || n != static_cast<int>(n))
            reject("voice_period_slots", *v, "must be a positive integer");
        p.voice_period_slots = static_cast<int>(n);
    }
    if (const std::string* v = doc.find("utility")) {
        if (*v != "log") reject("utility", *v, "only 'log' is supported");
    }
    if (const std::string* v = doc.find("seed")) {
        const double s = parse_number(*v, "seed");
        if (s < 0 || s != static_cast<std::uint64_t>(s))
            reject("seed", *v, "must be a nonnegative integer");
        p.seed = static_cast<std::uint64_t>(s);
    }

    if (p.num_voice_users > 0 && p.m_v <= p.num_voice_users * p.theta * p.gamma)
        throw std::invalid_argument(
            "config invalid: m_v must exceed voice_users * theta * gamma (the "
            "voice feasibility coefficient would not be positive)");

    auto solver_num = [&](const char* key, double* field, double lo) {
        if (const std::string* v = doc.find(key)) {
            *field = parse_number(*v, key);
            if (*field < lo) reject(key, *v, "value out of range");
        }
    };
    solver_num("solver_tol_primal", &p.solver.tol_primal, 0.0);
    solver_num("solver_tol_dual", &p.solver.tol_dual, 0.0);
    solver_num("solver_q_scale", &p.solver.q_scale, 0.0);
    solver_num("solver_beta_min", &p.solver.beta_min, 0.0);
    if (const std::string* v = doc.find("solver_max_inner")) {
        p.solver.max_inner = static_cast<int>(parse_number(*v, "solver_max_inner"));
        if (p.solver.max_inner < 1) reject("solver_max_inner", *v, "must be >= 1");
    }
    if (const std::string* v = doc.find("solver_max_outer")) {
        p.solver.max_outer = static_cast<int>(parse_number(*v, "solver_max_outer"));
        if (p.solver.max_outer < 1) reject("solver_max_outer", *v, "must be >= 1");
    }

    doc.reject_unknown();
    return p;
}

/// Backhaul rate available to data traffic after the voice reservation.
inline double available_backhaul(const SystemParams& p) {
    return p.r_bh - p.r_bh_voice;
}

}  // namespace ehsched
