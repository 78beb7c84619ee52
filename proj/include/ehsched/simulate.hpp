#pragma once

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehsched/baselines.hpp"
#include "ehsched/channel.hpp"
#include "ehsched/energy.hpp"
#include "ehsched/metrics.hpp"
#include "ehsched/params.hpp"
#include "ehsched/scheduler.hpp"

namespace ehsched {

enum class SchedulerKind { Stochastic, PfPerUser, PfSum };

inline SchedulerKind parse_scheduler_kind(const std::string& name) {
    if (name == "stochastic") return SchedulerKind::Stochastic;
    if (name == "pf-per-user") return SchedulerKind::PfPerUser;
    if (name == "pf-sum") return SchedulerKind::PfSum;
    throw std::invalid_argument(
        "unknown scheduler '" + name +
        "' (expected stochastic, pf-per-user, or pf-sum)");
}

inline const char* scheduler_kind_name(SchedulerKind k) {
    switch (k) {
        case SchedulerKind::Stochastic: return "stochastic";
        case SchedulerKind::PfPerUser: return "pf-per-user";
        case SchedulerKind::PfSum: return "pf-sum";
    }
    return "?";
}

/// Proportional-fair slot with the same energy/voice preamble as the
/// stochastic scheduler; the backhaul enters as a hard intra-slot cap
/// instead of through multipliers.
inline SlotResult pf_run_slot(const SystemParams& p,
                              const ChannelSnapshot& snap,
                              double battery_level, PfState& pf,
                              PfCapMode mode,
                              const VoiceAllocation* frozen_voice = nullptr) {
    SlotResult res;
    res.slot = snap.slot;
    res.battery_before = battery_level;
    res.cap = mode == PfCapMode::PerUser
                  ? per_user_backhaul_cap(p)
                  : available_backhaul(p) / p.xi;
    res.data.powers.assign(p.num_data_users, 0.0);
    res.data.codes.assign(p.num_data_users, 0.0);
    res.data.rates.assign(p.num_data_users, 0.0);
    res.weights = pf_weights(pf);

    const double phi = traffic_budget_phi(battery_level, p);
    const double pilot_fixed = p.slot_duration * (p.p_cpich + p.p_fixed);
    if (phi < 0) {
        res.outage = true;
        res.voice.powers.assign(p.num_voice_users, 0.0);
        for (int k = 0; k < p.num_voice_users; ++k)
            res.voice.dropped.push_back(k);
        res.consumed = std::min(battery_level, pilot_fixed);
        pf_update(pf, res.data.rates);
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
    res.data = solve_pf_slot(inst, res.weights, mode, res.cap, p.solver).alloc;

    const double data_power =
        std::accumulate(res.data.powers.begin(), res.data.powers.end(), 0.0);
    res.consumed = slot_energy(p.p_cpich, res.voice.total_power + data_power,
                               p.p_fixed, p.slot_duration);

    pf_update(pf, res.data.rates);
    return res;
}

struct SimulationResult {
    MetricsLog log;
    DualState duals;      // final multipliers (stochastic runs)
    PfState pf;           // final throughput averages (PF runs)
    RunSummary summary;
};

/// Full seeded run. Per-slot draw order is fixed: fading (voice users then
/// data users) first, then the harvest coin, so logs are reproducible
/// bit-for-bit across schedulers sharing a seed. `grid_power` pins the
/// battery at b_max (mains supply); harvest is still drawn and logged.
inline SimulationResult run_simulation(const SystemParams& p,
                                       SchedulerKind kind, long slots,
                                       std::uint64_t seed,
                                       bool grid_power = false) {
    if (slots <= 0)
        throw std::invalid_argument("run_simulation: slots must be positive");
    Rng rng(seed);
    FadingProcess fading(p, rng);
    BatteryState battery{grid_power ? p.b_max : p.b_init};
    SimulationResult out;
    out.duals = DualState(p.num_data_users);
    out.pf = PfState(p.num_data_users);
    out.log.data_users = p.num_data_users;
    out.log.rows.reserve(static_cast<std::size_t>(slots));

    std::vector<double> rate_sums(p.num_data_users, 0.0);
    VoiceAllocation frozen;
    bool have_frozen = false;

    for (long t = 0; t < slots; ++t) {
        const ChannelSnapshot snap = fading.advance(t, rng);
        const HarvestSample harvest =
            sample_harvest(p.harvest.at(t), p.packet_energy, rng);

        const bool reuse_voice = p.voice_period_slots > 1 && have_frozen &&
                                 (t % p.voice_period_slots) != 0;
        const VoiceAllocation* fv = reuse_voice ? &frozen : nullptr;

        SlotResult res =
            kind == SchedulerKind::Stochastic
                ? run_slot(p, snap, battery.level, out.duals, fv)
                : pf_run_slot(p, snap, battery.level, out.pf,
                              kind == SchedulerKind::PfPerUser
                                  ? PfCapMode::PerUser
                                  : PfCapMode::Sum,
                              fv);
        if (!res.outage && p.voice_period_slots > 1 && !reuse_voice) {
            frozen = res.voice;
            have_frozen = true;
        }

        MetricsRow row;
        row.slot = t;
        row.outage = res.outage ? 1 : 0;
        row.battery = battery.level;
        row.consumed = res.consumed;
        row.harvested = harvest.amount;
        row.s_star = res.s_star;
        row.cap = res.cap;
        row.voice_dropped = static_cast<int>(res.voice.dropped.size());
        row.voice_power = res.voice.total_power;
        row.data_power = std::accumulate(res.data.powers.begin(),
                                         res.data.powers.end(), 0.0);
        row.rates = res.data.rates;
        row.avg_rates.resize(p.num_data_users);
        for (int k = 0; k < p.num_data_users; ++k) {
            rate_sums[k] += res.data.rates[k];
            row.avg_rates[k] = rate_sums[k] / static_cast<double>(t + 1);
        }
        row.lambda = out.duals.lambda;
        row.mu = out.duals.mu;
        out.log.rows.push_back(std::move(row));

        if (!grid_power)
            battery = update_battery(battery, res.consumed, harvest.amount,
                                     p.b_max);
    }
    out.summary = summarize(out.log);
    return out;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

/// Parameter sweep: rerun one base config over a list of values of a single
/// scalar knob, for one or more schedulers, and tabulate run summaries.
struct SweepSpec {
    std::string config_path;     // resolved against the spec file's directory
    std::string variable;        // r_bh | harvest_prob | alpha
    std::vector<std::string> value_texts;  // original spellings, for the CSV
    std::vector<double> values;            // parsed SI values
    long slots = 0;
    std::vector<SchedulerKind> schedulers;
    std::uint64_t seed = 0;      // 0 means "use the config's seed"
    bool grid_power = false;
};

inline SweepSpec load_sweep_spec(std::string_view text,
                                 const std::string& spec_dir) {
    using detail::reject;
    detail::KeyValueDoc doc{text};
    SweepSpec spec;

    spec.config_path =
        (std::filesystem::path(spec_dir) / doc.require("config")).string();
    spec.variable = doc.require("variable");
    if (spec.variable != "r_bh" && spec.variable != "harvest_prob" &&
        spec.variable != "alpha")
        reject("variable", spec.variable,
               "must be one of r_bh, harvest_prob, alpha");

    for (const std::string& item : detail::split_list(doc.require("values"))) {
        double v;
        if (spec.variable == "r_bh")
            v = parse_rate(item, "values");
        else
            v = parse_number(item, "values");
        if (spec.variable != "r_bh" && (v < 0 || v > 1))
            reject("values", item, "must be in [0, 1] for this variable");
        if (spec.variable == "r_bh" && v <= 0)
            reject("values", item, "rates must be positive");
        spec.value_texts.push_back(item);
        spec.values.push_back(v);
    }
    if (spec.values.empty()) reject("values", "", "must not be empty");

    const double slots = parse_number(doc.require("slots"), "slots");
    if (slots < 1 || slots != static_cast<long>(slots))
        reject("slots", doc.require("slots"), "must be a positive integer");
    spec.slots = static_cast<long>(slots);

    for (const std::string& item :
         detail::split_list(doc.require("schedulers")))
        spec.schedulers.push_back(parse_scheduler_kind(item));

    if (const std::string* v = doc.find("seed")) {
        const double s = parse_number(*v, "seed");
        if (s < 0 || s != static_cast<std::uint64_t>(s))
            reject("seed", *v, "must be a nonnegative integer");
        spec.seed = static_cast<std::uint64_t>(s);
    }
    if (const std::string* v = doc.find("grid_power")) {
        if (*v == "true")
            spec.grid_power = true;
        else if (*v == "false")
            spec.grid_power = false;
        else
            reject("grid_power", *v, "must be 'true' or 'false'");
    }
    doc.reject_unknown();
    return spec;
}

inline void apply_sweep_value(SystemParams& p, const std::string& variable,
                              double value) {
    if (variable == "r_bh") {
        if (value <= p.r_bh_voice)
            throw std::invalid_argument(
                "sweep value for r_bh must exceed r_bh_voice");
        p.r_bh = value;
    } else if (variable == "harvest_prob") {
        p.harvest.entries = {{0, value}};
    } else if (variable == "alpha") {
        if (value <= 0)
            throw std::invalid_argument("sweep alpha must be positive");
        p.alpha = value;
    } else {
        throw std::invalid_argument("unknown sweep variable " + variable);
    }
}

struct SweepRow {
    std::string value_text;
    double value = 0;
    SchedulerKind scheduler = SchedulerKind::Stochastic;
    double available_backhaul = 0;  // (r_bh - r_bh_voice) / xi, b/s for data
    double per_user_cap = 0;
    RunSummary summary;
};

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    const SystemParams base = load_params(read_text_file(spec.config_path));
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        SystemParams p = base;
        apply_sweep_value(p, spec.variable, spec.values[i]);
        for (SchedulerKind kind : spec.schedulers) {
            SweepRow row;
            row.value_text = spec.value_texts[i];
            row.value = spec.values[i];
            row.scheduler = kind;
            row.available_backhaul = available_backhaul(p) / p.xi;
            row.per_user_cap = per_user_backhaul_cap(p);
            const std::uint64_t seed = spec.seed ? spec.seed : p.seed;
            row.summary =
                run_simulation(p, kind, spec.slots, seed, spec.grid_power)
                    .summary;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline void write_sweep_csv(const std::string& variable,
                            const std::vector<SweepRow>& rows,
                            std::ostream& os) {
    os << variable
       << ",value,scheduler,available_backhaul,per_user_cap,slots,"
          "outage_fraction,mean_battery,sum_rate,min_rate,max_rate,jain\n";
    for (const auto& r : rows) {
        const double n = static_cast<double>(std::max<long>(r.summary.slots, 1));
        os << r.value_text << "," << format_double(r.value) << ","
           << scheduler_kind_name(r.scheduler) << ","
           << format_double(r.available_backhaul) << ","
           << format_double(r.per_user_cap) << "," << r.summary.slots << ","
           << format_double(static_cast<double>(r.summary.outages) / n) << ","
           << format_double(r.summary.mean_battery) << ","
           << format_double(r.summary.sum_rate) << ","
           << format_double(r.summary.min_rate) << ","
           << format_double(r.summary.max_rate) << ","
           << format_double(r.summary.jain) << "\n";
    }
}

}  // namespace ehsched
