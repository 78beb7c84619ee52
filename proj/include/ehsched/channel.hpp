#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ehsched/params.hpp"
#include "ehsched/rng.hpp"

namespace ehsched {

/// Log-distance path loss, returned as a linear power gain in (0, 1].
/// PL_dB(d) = ref_loss_db + 10 * exponent * log10(d / ref_distance).
inline double path_loss_gain(double distance, double exponent,
                             double ref_loss_db, double ref_distance) {
    if (distance <= 0 || ref_distance <= 0)
        throw std::invalid_argument("path_loss_gain: distances must be positive");
    const double pl_db =
        ref_loss_db + 10.0 * exponent * std::log10(distance / ref_distance);
    return std::pow(10.0, -pl_db / 10.0);
}

/// Per-slot channel power gains, path loss times Rayleigh fading power.
struct ChannelSnapshot {
    long slot = 0;
    std::vector<double> voice_gains;
    std::vector<double> data_gains;
};

/// Per-user complex fading envelope evolving as
///   g(t) = rho * g(t-1) + sqrt(1 - rho^2) * w,   w ~ CN(0, 1),
/// so |g|^2 has unit mean; rho = 0 gives i.i.d. Rayleigh slots.
class FadingProcess {
  public:
    FadingProcess(const SystemParams& params, Rng& rng)
        : rho_(params.fading_correlation) {
        auto gains_for = [&](const std::vector<double>& dist) {
            std::vector<double> g;
            g.reserve(dist.size());
            for (double d : dist)
                g.push_back(path_loss_gain(d, params.path_loss_exponent,
                                           params.path_loss_ref_db,
                                           params.path_loss_ref_distance));
            return g;
        };
        voice_pl_ = gains_for(params.voice_distances);
        data_pl_ = gains_for(params.data_distances);
        voice_state_.resize(voice_pl_.size());
        data_state_.resize(data_pl_.size());
        for (auto& s : voice_state_) s = complex_gaussian(rng);
        for (auto& s : data_state_) s = complex_gaussian(rng);
    }

    /// Advances every user's envelope one slot and returns the gains.
    ChannelSnapshot advance(long slot, Rng& rng) {
        const double keep = rho_;
        const double mix = std::sqrt(1.0 - rho_ * rho_);
        auto step = [&](std::vector<std::complex<double>>& state,
                        const std::vector<double>& pl,
                        std::vector<double>& out) {
            out.resize(state.size());
            for (std::size_t k = 0; k < state.size(); ++k) {
                state[k] = keep * state[k] + mix * complex_gaussian(rng);
                out[k] = pl[k] * std::norm(state[k]);
            }
        };
        ChannelSnapshot snap;
        snap.slot = slot;
        step(voice_state_, voice_pl_, snap.voice_gains);
        step(data_state_, data_pl_, snap.data_gains);
        return snap;
    }

    const std::vector<double>& voice_path_loss() const { return voice_pl_; }
    const std::vector<double>& data_path_loss() const { return data_pl_; }

  private:
    double rho_;
    std::vector<double> voice_pl_, data_pl_;
    std::vector<std::complex<double>> voice_state_, data_state_;
};

}  // namespace ehsched
