#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace distsync {

// Cooperative beamforming scenario: n_t transmitters combine at n_r receivers
// with Gaussian residual sync errors; only one error kind may be nonzero per
// run (the requirement curves treat them individually).
struct dbf_scenario {
    int n_t = 8;
    int n_r = 8;
    double snr_link_db = -1.5;      // per-pair link SNR
    double frame_duration_s = 5e-3; // coherence loss is evaluated at frame end
    double symbol_duration_s = 1e-6;
    double rms_freq_error_hz = 0.0;
    double rms_timing_error_ts = 0.0; // units of symbol duration
    long long n_trials = 100000;
    double pulse_rolloff = 0.25; // raised-cosine beta
    int pulse_span_symbols = 8;  // ISI taps evaluated over [-span, span]
};

void validate(const dbf_scenario& scn);

// raised-cosine pulse value at t symbols (unit symbol spacing), zero outside
// |t| > span; handles the 1/(2*beta) singularity
double raised_cosine(double t, double rolloff, int span);

// Residual-CFO decoherence: per trial each transmitter phase walks to
// 2 pi delta_i T_frame; SINR = snr * n_t^2 * n_r * |mean of unit phasors|^2 ...
// averaged in linear power, returned in dB.
double sinr_freq_error(const dbf_scenario& scn, uint64_t seed);

// Residual-STO intersymbol interference: combined symbol-spaced response
// c[k] = sum_i p_rc(k - eps_i); SINR = s|c0|^2 / (s * sum_{k!=0}|ck|^2 + 1),
// s = snr * n_r; ISI adds coherently (all nodes beam the same symbol stream).
double sinr_timing_error(const dbf_scenario& scn, uint64_t seed);

struct dbf_sweep_row {
    int n_t;
    int n_r;
    double error_level;
    double mean_sinr_db;
    long long trials;
};

// cross product of group sizes (applied to n_t and n_r alike) and error levels
std::vector<dbf_sweep_row> sweep_requirements(const dbf_scenario& base,
                                              const std::vector<int>& group_sizes,
                                              const std::vector<double>& error_levels,
                                              const std::string& error_kind, uint64_t seed);

std::string sweep_to_csv(const std::vector<dbf_sweep_row>& rows);

} // namespace distsync
