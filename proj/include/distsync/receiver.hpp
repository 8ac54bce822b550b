#pragma once
#include <array>

#include "distsync/detector.hpp"
#include "distsync/preamble.hpp"
#include "distsync/signal.hpp"

namespace distsync {

// Full output of one synchronization attempt. Estimate fields are undefined
// unless detected is true.
struct sync_estimate {
    bool detected = false;
    int d_hat = 0;          // integer delay, samples
    double zeta_hat = 0.0;  // fractional delay, units ts, one of the dictionary values
    double eps_f_hat = 0.0; // normalized CFO, rad/sample (filtered when tracking)
    double phi_hat = 0.0;   // phase at the detected peak, rad
    double peak_value = 0.0;
};

using mat2 = std::array<std::array<double, 2>, 2>;
using mat3 = std::array<std::array<double, 3>, 3>;

// Two-state tracker over [phi, eps_f]. Covariances are value members so callers
// own sequencing; initialized=false until the first measurement seeds the state.
struct ekf_state {
    double phi = 0.0;   // rad, wrapped to (-pi, pi]
    double eps_f = 0.0; // rad/sample
    mat2 covariance{};
    mat2 process_noise{{{1e-6, 0.0}, {0.0, 1e-10}}};
    // eps term anchored to the one-shot variance bound at the 20 dB operating
    // point; the config layer recomputes it for the configured SNR
    mat3 measurement_noise{{{0.05, 0.0, 0.0}, {0.0, 0.05, 0.0}, {0.0, 0.0, 1.5117e-7}}};
    bool initialized = false;
};

// phase/CFO measurement fed to the filter: (cos, sin) from the unit-normalized
// peak sample, eps from the one-shot estimator
struct ekf_measurement {
    double cos_phi = 1.0;
    double sin_phi = 0.0;
    double eps_f = 0.0;
};

double wrap_phase(double phi); // into (-pi, pi]

// delay-and-multiply estimate over (m_rep-1)*n_zc products:
// angle(sum r[d+n_zc+n] * conj(r[d+n])) / n_zc, in (-pi/n_zc, pi/n_zc]
double estimate_cfo_oneshot(const complex_signal& r, int d_hat, const preamble_spec& spec);

// x <- F x with F = [[1, n_cyc], [0, 1]]; P <- F P F^T + Q; phi wrapped
void ekf_predict(ekf_state& st, long long n_cyc);

// EKF update with observation g(x) = [cos phi, sin phi, eps_f]. First call
// (initialized=false) seeds the state from the measurement instead: a wide
// prior couples into eps through the predict cross term n_cyc * P_ee and can
// destabilize the loop, so the filter starts at the first observation.
void ekf_update(ekf_state& st, const ekf_measurement& z);

// r_tilde[n] = r[n] * exp(-j eps_f_hat n) * (apply_phase ? exp(-j phi_hat) : 1)
complex_signal compensate_cfo(const complex_signal& r, double eps_f_hat, double phi_hat,
                              bool apply_phase = false);

// Matched-filter bank over the dictionary, energy-normalized:
// argmax_zeta sum_m |<r_tilde segment m, replica(zeta)>|^2 / ||replica(zeta)||^2.
// Normalization keeps unequal-energy replicas (kernel truncation) from biasing
// the argmax toward integer delays. Ties break toward smaller |zeta|, then
// toward the earlier dictionary entry.
double estimate_fractional_delay(const complex_signal& r_tilde, int d_hat,
                                 const preamble_spec& spec, const zc_dictionary& dict);

// Full chain: detect -> one-shot CFO -> (EKF predict/update when tracking) ->
// compensate -> fractional delay. ekf may be null (single-shot mode); when
// tracking, n_cyc is the sample count since the previous preamble and the EKF
// state is advanced in place. No detection leaves ekf untouched.
sync_estimate synchronize(const complex_signal& r, const preamble_spec& spec,
                          const detector_config& cfg, const zc_dictionary& dict,
                          double noise_power, ekf_state* ekf = nullptr, long long n_cyc = 0);

} // namespace distsync
