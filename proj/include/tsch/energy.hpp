#pragma once

#include <cstdint>

#include "tsch/errors.hpp"
#include "tsch/metrics.hpp"
#include "tsch/sim.hpp"

namespace tsch {

// Per-slot-event energy in joules.
struct EnergyProfile {
    double e_tx = 0.0;     // transmit data, receive ACK
    double e_rx = 0.0;     // receive data, transmit ACK
    double e_listen = 0.0; // idle listening (wasted)
};

// OpenMote B running OpenWSN.
inline constexpr EnergyProfile kOpenMoteB{266e-6, 284e-6, 138e-6};
// OpenMoteSTM.
inline constexpr EnergyProfile kOpenMoteStm{485.7e-6, 651.0e-6, 303.3e-6};

// Average link power over the evaluated span: transmissions are TP+FN (a
// miss only delays the frame to a later usable slot), the residual idle
// listening under prediction is FP, and FP+TN without it.
struct EnergyReport {
    double p_tx = 0.0;
    double p_rx = 0.0;
    double p_listen = 0.0;
    double p_listen_no_ml = 0.0;
};

inline EnergyReport energy(const ConfusionMatrix& cm, const EnergyProfile& profile,
                           std::uint64_t n_samples, double t_matrix_s) {
    if (n_samples == 0 || t_matrix_s <= 0.0)
        throw DomainError("energy: span duration must be positive");
    const double span_s = static_cast<double>(n_samples) * t_matrix_s;
    const double transmissions = static_cast<double>(cm.tp + cm.fn);
    const double listen_unit = profile.e_listen / span_s;
    EnergyReport r;
    r.p_tx = transmissions * profile.e_tx / span_s;
    r.p_rx = transmissions * profile.e_rx / span_s;
    r.p_listen = static_cast<double>(cm.fp) * listen_unit;
    // n_listen = FP + TN without prediction; summed this way the difference
    // to p_listen is exactly the true negatives' share.
    r.p_listen_no_ml = r.p_listen + static_cast<double>(cm.tn) * listen_unit;
    return r;
}

// Joules actually spent by a node during a simulation, from its slot counts.
struct EnergyTally {
    double tx_j = 0.0;
    double rx_j = 0.0;
    double idle_j = 0.0;
    double total_j() const { return tx_j + rx_j + idle_j; }
};

inline EnergyTally tally(const NodeActivity& counts, const EnergyProfile& profile) {
    return EnergyTally{static_cast<double>(counts.tx_slots) * profile.e_tx,
                       static_cast<double>(counts.rx_slots) * profile.e_rx,
                       static_cast<double>(counts.idle_slots) * profile.e_listen};
}

} // namespace tsch
