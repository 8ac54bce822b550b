#pragma once
#include <cstdint>

#include "distsync/kernel.hpp"
#include "distsync/signal.hpp"

namespace distsync {

// Ground-truth impairments injected between master and slave. Hidden from the
// estimators; the harness keeps them for residual accounting.
struct impairment_params {
    double cfo_hz = 0.0;      // carrier frequency offset
    double delay_ts = 0.0;    // total timing offset in units of ts, >= 0
    cplx h0 = {1.0, 0.0};     // flat complex channel gain
    double noise_power = 0.0; // E|w|^2 per sample

    // normalized CFO in rad/sample
    double eps_f(double ts) const { return 2.0 * M_PI * cfo_hz * ts; }
    int d_star() const { return static_cast<int>(delay_ts); }
    double zeta_star() const { return delay_ts - static_cast<double>(d_star()); }
};

// r[n] = h0 * exp(j*eps_f*n) * sum_k tx[k] * tap((n-k) - delay_ts) + w[n]
// w ~ circular complex gaussian, variance noise_power, drawn from `seed`.
// Output length = len(tx) + pad. Requires pad to cover the delayed tail
// and |eps_f| * n_zc_window < 2*pi (phase must stay unwrapped over one period;
// enforced against the estimator window length via unwrap_limit).
complex_signal apply_impairments(const complex_signal& tx, const impairment_params& p,
                                 interp_kernel kernel, uint64_t seed, int pad);

// largest |cfo_hz| the one-shot estimator can represent for a given period length
double cfo_unwrap_limit_hz(int n_zc, double ts);

// mean |x|^2 over the input; unbiased for sigma^2 on noise-only samples
double estimate_noise_power(const complex_signal& noise_only);

// one random-walk step of the oscillator offset: increment ~ N(0, (rate*dt)^2)
double oscillator_drift_step(double current_cfo_hz, double drift_rate_hz_per_s, double dt,
                             class rng& stream);

} // namespace distsync
