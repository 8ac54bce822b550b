#include "distsync/detector.hpp"

#include <cmath>

namespace distsync {

namespace {

// no CFAR trigger until this many trace samples of history exist; an empty
// trailing average would fire on the first nonzero sample
constexpr int cfar_warmup = 64;

// Q(m, x) = exp(-x) * sum_{k<m} x^k / k!  (upper tail of Gamma(m,1), integer m)
double erlang_upper_tail(int m, double x) {
    if (x <= 0.0) return 1.0;
    // accumulate in log space? terms are benign for the m, x in play (m <= ~100)
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < m; ++k) {
        term *= x / k;
        sum += term;
    }
    return std::exp(-x + std::log(sum));
}

} // namespace

void validate(const detector_config& cfg) {
    require(cfg.cfar_factor > 1.0, "cfar_factor must be > 1");
    require(cfg.cfar_window >= 1, "cfar_window must be >= 1");
    require(cfg.target_pfa > 0.0 && cfg.target_pfa < 1.0, "target_pfa must lie in (0,1)");
}

double detection_statistic(const complex_signal& r, const preamble_spec& spec, int n) {
    validate(spec);
    const int need = n + spec.preamble_len();
    require(n >= 0 && need <= static_cast<int>(r.samples.size()),
            "detection_statistic: index out of range");
    auto s = zc_sequence(spec.n_zc, spec.root);
    double y = 0.0;
    for (int m = 0; m < spec.m_rep; ++m) {
        cplx acc{0.0, 0.0};
        const int base = n + m * spec.n_zc;
        for (int k = 0; k < spec.n_zc; ++k)
            acc += s[static_cast<size_t>(k)] * std::conj(r.samples[static_cast<size_t>(base + k)]);
        y += std::norm(acc);
    }
    return y;
}

std::vector<double> detection_statistic_trace(const complex_signal& r, const preamble_spec& spec) {
    validate(spec);
    const int len = static_cast<int>(r.samples.size());
    const int n_max = len - spec.preamble_len();
    require(n_max >= 0, "detection_statistic_trace: signal shorter than the preamble");
    auto s = zc_sequence(spec.n_zc, spec.root);

    // c[t] = sum_k s[k] * conj(r[t+k]); y[n] = sum_m |c[n + m*n_zc]|^2
    const int n_c = len - spec.n_zc + 1;
    std::vector<double> c_mag2(static_cast<size_t>(n_c));
    for (int t = 0; t < n_c; ++t) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < spec.n_zc; ++k)
            acc += s[static_cast<size_t>(k)] * std::conj(r.samples[static_cast<size_t>(t + k)]);
        c_mag2[static_cast<size_t>(t)] = std::norm(acc);
    }
    std::vector<double> y(static_cast<size_t>(n_max + 1), 0.0);
    for (int n = 0; n <= n_max; ++n) {
        double acc = 0.0;
        for (int m = 0; m < spec.m_rep; ++m)
            acc += c_mag2[static_cast<size_t>(n + m * spec.n_zc)];
        y[static_cast<size_t>(n)] = acc;
    }
    return y;
}

double gamma_upper_tail_inverse(int m, double pfa) {
    require(m >= 1, "gamma_upper_tail_inverse: shape must be >= 1");
    require(pfa > 0.0 && pfa < 1.0, "gamma_upper_tail_inverse: pfa must lie in (0,1)");
    // bracket: Q is decreasing in x; Q(m, m + 40 + 10*sqrt(m)) < 1e-12 for small m
    double lo = 0.0, hi = static_cast<double>(m) + 40.0 + 10.0 * std::sqrt(static_cast<double>(m));
    while (erlang_upper_tail(m, hi) > pfa) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (erlang_upper_tail(m, mid) > pfa)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

double gamma_null_threshold(const preamble_spec& spec, double noise_power, double target_pfa) {
    validate(spec);
    require(noise_power >= 0.0, "gamma_null_threshold: negative noise power");
    if (noise_power == 0.0) return 0.0; // noiseless: any energy is a detection
    auto s = zc_sequence(spec.n_zc, spec.root);
    double e_per_sample = 0.0;
    for (const auto& x : s) e_per_sample += std::norm(x);
    e_per_sample /= static_cast<double>(spec.n_zc);
    const double scale = static_cast<double>(spec.n_zc) * noise_power * e_per_sample;
    return scale * gamma_upper_tail_inverse(spec.m_rep, target_pfa);
}

detection_result detect_and_integer_delay(const complex_signal& r, const preamble_spec& spec,
                                          const detector_config& cfg, double noise_power) {
    validate(cfg);
    require(static_cast<int>(r.samples.size()) >= 2 * spec.preamble_len(),
            "detect_and_integer_delay: need at least two preamble lengths of samples");
    auto y = detection_statistic_trace(r, spec);

    detection_result res;
    if (cfg.mode == detector_mode::noise_floor_gamma) {
        const double eta = gamma_null_threshold(spec, noise_power, cfg.target_pfa);
        for (int n = 0; n < static_cast<int>(y.size()); ++n) {
            if (y[static_cast<size_t>(n)] > eta &&
                (!res.detected || y[static_cast<size_t>(n)] > res.peak)) {
                res.detected = true;
                res.d_hat = n;
                res.peak = y[static_cast<size_t>(n)];
            }
        }
        return res;
    }

    // CFAR: trailing mean over min(cfar_window, history) previous samples,
    // current sample excluded; strict inequality against factor * mean
    double run_sum = 0.0; // sum of y[max(0, n - cfar_window) .. n-1]
    for (int n = 0; n < static_cast<int>(y.size()); ++n) {
        if (n >= cfar_warmup) {
            const int w = std::min(cfg.cfar_window, n);
            const double mean = run_sum / static_cast<double>(w);
            if (y[static_cast<size_t>(n)] > cfg.cfar_factor * mean &&
                (!res.detected || y[static_cast<size_t>(n)] > res.peak)) {
                res.detected = true;
                res.d_hat = n;
                res.peak = y[static_cast<size_t>(n)];
            }
        }
        run_sum += y[static_cast<size_t>(n)];
        if (n >= cfg.cfar_window) run_sum -= y[static_cast<size_t>(n - cfg.cfar_window)];
    }
    return res;
}

} // namespace distsync
