#pragma once
#include <string>

#include "distsync/dbfsim.hpp"
#include "distsync/detector.hpp"
#include "distsync/kernel.hpp"
#include "distsync/preamble.hpp"
#include "distsync/receiver.hpp"

namespace distsync {

// Whole-run configuration. Every key has a default; a config file overrides
// individual keys with namespaced key=value lines ('#' comments allowed).
// Unknown keys are hard errors so typos cannot silently revert a knob.
struct config {
    // preamble.*
    int n_zc = 63;
    int root = 25;
    int m_rep = 10;
    int n_zeta = 16;
    interp_kernel kernel = interp_kernel::hann_sinc;

    // channel.*
    double sample_rate_hz = 1e6;
    double snr_db = 20.0;
    double cfo_hz = 1200.0;
    double delay_ts = 25.3;
    double h0_phase_rad = 0.0;     // |h0| fixed at 1
    double drift_hz_per_s = 0.0;   // random-walk rate between frames
    double clock_skew_ppm = 0.0;   // accepted but not modeled (kept at 0)

    // schedule.*
    double t_guard_ms = 4.0;
    double t_frame_ms = 100.0;
    int n_frames = 650;
    int lead_samples = 1200;           // noise ahead of each frame's preamble
    double timer_jitter_samples = 0.0; // accepted hook; preamble period is exact

    // detector.*
    detector_config detector;
    double noise_power_override = -1.0; // < 0 means "derive from channel SNR"

    // ekf.*
    bool ekf_enabled = true;
    double ekf_q_phi = 1e-6;
    double ekf_q_eps = 1e-10;
    double ekf_r_cos = 0.05;
    double ekf_r_sin = 0.05;
    double ekf_r_eps = -1.0; // < 0 means "CFO bound at the configured SNR"
    bool apply_phase = false;

    // dbf.*
    dbf_scenario dbf;
    std::string dbf_sweep_kind = "freq";
    std::vector<int> dbf_sweep_sizes = {2, 4, 8};
    std::vector<double> dbf_sweep_levels = {0.0, 10.0, 20.0, 40.0};

    double ts() const { return 1.0 / sample_rate_hz; }
    double noise_power() const; // unit-power preamble, |h0|=1
    preamble_spec preamble() const;
    ekf_state make_ekf_state() const;
};

// cross-field checks (frame long enough for preamble + guard, CFO inside the
// one-shot unwrap range, positive rates, ...)
void validate(const config& cfg);

// apply key=value lines to defaults; unknown key or bad value throws
config parse_config_text(const std::string& text);
config parse_config_file(const std::string& path); // "defaults" skips the read

} // namespace distsync
