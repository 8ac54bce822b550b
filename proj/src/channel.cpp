#include "distsync/channel.hpp"

#include <cmath>

#include "distsync/rng.hpp"

namespace distsync {

complex_signal apply_impairments(const complex_signal& tx, const impairment_params& p,
                                 interp_kernel kernel, uint64_t seed, int pad) {
    require(!tx.samples.empty(), "apply_impairments: empty input");
    require(p.noise_power >= 0.0, "apply_impairments: negative noise power");
    require(p.delay_ts >= 0.0, "apply_impairments: negative delay");
    const double eps = p.eps_f(tx.sample_duration);
    // |eps| >= pi would alias the rotation inside a single sample interval
    require(std::abs(eps) < M_PI, "apply_impairments: CFO beyond +-fs/2");
    const int h = kernel_half_span(kernel);
    require(pad >= h + static_cast<int>(std::ceil(p.delay_ts)),
            "apply_impairments: pad too small for delay + kernel span");

    const int n_in = static_cast<int>(tx.samples.size());
    const int n_out = n_in + pad;
    complex_signal out;
    out.sample_duration = tx.sample_duration;
    out.samples.assign(static_cast<size_t>(n_out), cplx{0.0, 0.0});

    // delayed = tx convolved with the kernel sampled at (n - k) - delay_ts;
    // taps vanish outside |.| <= half span, so k ranges over a short window.
    for (int n = 0; n < n_out; ++n) {
        cplx acc{0.0, 0.0};
        const double center = static_cast<double>(n) - p.delay_ts;
        int k_lo = static_cast<int>(std::ceil(center - h));
        int k_hi = static_cast<int>(std::floor(center + h));
        if (k_lo < 0) k_lo = 0;
        if (k_hi > n_in - 1) k_hi = n_in - 1;
        for (int k = k_lo; k <= k_hi; ++k) {
            double w = kernel_tap(kernel, center - static_cast<double>(k));
            if (w != 0.0) acc += tx.samples[static_cast<size_t>(k)] * w;
        }
        double ph = eps * static_cast<double>(n);
        out.samples[static_cast<size_t>(n)] = p.h0 * cplx{std::cos(ph), std::sin(ph)} * acc;
    }

    if (p.noise_power > 0.0) {
        rng noise(seed);
        for (auto& x : out.samples) x += noise.complex_gaussian(p.noise_power);
    }
    return out;
}

double cfo_unwrap_limit_hz(int n_zc, double ts) {
    // one-shot estimate lives in (-pi/n_zc, pi/n_zc] rad/sample
    return 1.0 / (2.0 * static_cast<double>(n_zc) * ts);
}

double estimate_noise_power(const complex_signal& noise_only) {
    require(noise_only.samples.size() >= 100, "estimate_noise_power: need >= 100 samples");
    double acc = 0.0;
    for (const auto& x : noise_only.samples) acc += std::norm(x);
    return acc / static_cast<double>(noise_only.samples.size());
}

double oscillator_drift_step(double current_cfo_hz, double drift_rate_hz_per_s, double dt,
                             rng& stream) {
    require(dt > 0.0, "oscillator_drift_step: dt must be positive");
    if (drift_rate_hz_per_s == 0.0) return current_cfo_hz;
    return current_cfo_hz + drift_rate_hz_per_s * dt * stream.gaussian();
}

} // namespace distsync
