#pragma once
#include <vector>

#include "distsync/preamble.hpp"
#include "distsync/signal.hpp"

namespace distsync {

enum class detector_mode {
    cfar_moving_average, // trigger when y > factor * trailing average of y
    noise_floor_gamma,   // trigger when y > gamma-null quantile for target_pfa
};

struct detector_config {
    detector_mode mode = detector_mode::cfar_moving_average;
    double cfar_factor = 10.0;
    int cfar_window = 1000;   // trailing samples averaged
    double target_pfa = 1e-4; // gamma mode only
};

void validate(const detector_config& cfg);

struct detection_result {
    bool detected = false;
    int d_hat = 0;     // sample index of the statistic peak
    double peak = 0.0; // statistic value at d_hat
};

// y[n] = sum_m |sum_k s_zc[k] * conj(r[n + k + m*n_zc])|^2, single index.
// Direct double sum; the trace below computes all n via one FIR pass.
double detection_statistic(const complex_signal& r, const preamble_spec& spec, int n);

// y[n] for n = 0 .. len(r) - m_rep*n_zc; equals detection_statistic at every n
std::vector<double> detection_statistic_trace(const complex_signal& r, const preamble_spec& spec);

// upper-tail inverse of Gamma(shape=m, scale=1): solves Q(m, x) = pfa where
// Q is the regularized upper incomplete gamma for integer shape (Erlang tail)
double gamma_upper_tail_inverse(int m, double pfa);

// detection threshold: under AWGN of power sigma2 the statistic is
// Gamma(m_rep, n_zc * sigma2 * energy_per_sample)-distributed
double gamma_null_threshold(const preamble_spec& spec, double noise_power, double target_pfa);

// Scans the whole trace. A sample triggers per the configured mode; d_hat is
// the argmax of y over all triggered samples (detected=false when none).
// noise_power is used by gamma mode only.
detection_result detect_and_integer_delay(const complex_signal& r, const preamble_spec& spec,
                                          const detector_config& cfg, double noise_power);

} // namespace distsync
