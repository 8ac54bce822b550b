#include <cmath>
#include <stdexcept>

#include "distsync/channel.hpp"
#include "distsync/receiver.hpp"
#include "distsync/rng.hpp"
#include "doctest.h"

using namespace distsync;

namespace {
complex_signal rx_window(double cfo_hz, double delay_ts, int lead, uint64_t seed,
                         double noise_power, double h0_phase = 0.0) {
    preamble_spec spec;
    complex_signal tx;
    tx.samples.assign(lead, cplx{0.0, 0.0});
    complex_signal p = build_preamble(spec);
    tx.samples.insert(tx.samples.end(), p.samples.begin(), p.samples.end());
    impairment_params imp;
    imp.cfo_hz = cfo_hz;
    imp.delay_ts = delay_ts;
    imp.h0 = std::polar(1.0, h0_phase);
    imp.noise_power = noise_power;
    int pad = 9 + static_cast<int>(std::ceil(delay_ts));
    complex_signal r = apply_impairments(tx, imp, interp_kernel::hann_sinc, seed, pad);
    if (static_cast<int>(r.samples.size()) < 1260 + lead)
        r.samples.resize(static_cast<size_t>(1260 + lead), cplx{0.0, 0.0});
    return r;
}

detector_config gamma_detector() {
    detector_config cfg;
    cfg.mode = detector_mode::noise_floor_gamma;
    return cfg;
}
} // namespace

TEST_CASE("phase wrap lands in (-pi, pi]") {
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(M_PI) == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(wrap_phase(-M_PI) == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(wrap_phase(1.5 * M_PI) == doctest::Approx(-0.5 * M_PI).epsilon(1e-12));
    CHECK(wrap_phase(2.0 * M_PI) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(std::abs(wrap_phase(1000.0)) <= M_PI);
}

TEST_CASE("one-shot cfo recovers a clean offset to machine precision") {
    for (double f : {3000.0, -5000.0, 120.0, 7900.0}) {
        complex_signal r = rx_window(f, 0.0, 0, 1, 0.0);
        double eps = estimate_cfo_oneshot(r, 0, preamble_spec{});
        CHECK(eps == doctest::Approx(2.0 * M_PI * f * 1e-6).epsilon(1e-10));
    }
}

TEST_CASE("one-shot cfo validates its window and repetition count") {
    complex_signal r = rx_window(0.0, 0.0, 0, 1, 0.0);
    preamble_spec one;
    one.m_rep = 1;
    CHECK_THROWS_AS(estimate_cfo_oneshot(r, 0, one), std::invalid_argument);
    CHECK_THROWS_AS(estimate_cfo_oneshot(r, 100000, preamble_spec{}), std::invalid_argument);
    complex_signal zeros;
    zeros.samples.assign(700, cplx{0.0, 0.0});
    CHECK_THROWS_AS(estimate_cfo_oneshot(zeros, 0, preamble_spec{}), std::domain_error);
}

TEST_CASE("one-shot std at 20 dB sits a few hertz wide") {
    preamble_spec spec;
    double s1 = 0.0, s2 = 0.0;
    const int trials = 300;
    for (int t = 0; t < trials; ++t) {
        complex_signal r = rx_window(1200.0, 0.0, 0, derive_seed(11, 0xCF0, t), 0.01);
        double f = estimate_cfo_oneshot(r, 0, spec) / (2.0 * M_PI * 1e-6);
        s1 += f - 1200.0;
        s2 += (f - 1200.0) * (f - 1200.0);
    }
    double mean = s1 / trials;
    double sd = std::sqrt(s2 / trials - mean * mean);
    CHECK(std::abs(mean) < 1.0);
    CHECK(sd > 2.0);
    CHECK(sd < 6.0);
}

TEST_CASE("predict advances phase by n_cyc eps and grows covariance as F P F^T + Q") {
    ekf_state st;
    st.initialized = true;
    st.phi = 0.25;
    st.eps_f = 0.1;
    st.covariance = {{{1.0, 0.0}, {0.0, 1.0}}};
    st.process_noise = {{{0.0, 0.0}, {0.0, 0.0}}};
    ekf_predict(st, 2);
    CHECK(st.phi == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(st.covariance[0][0] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(st.covariance[0][1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(st.covariance[1][0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(st.covariance[1][1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(ekf_predict(st, 0), std::invalid_argument);
}

TEST_CASE("predict wraps the phase state") {
    ekf_state st;
    st.initialized = true;
    st.phi = 3.0;
    st.eps_f = 0.2;
    ekf_predict(st, 1);
    CHECK(st.phi == doctest::Approx(3.2 - 2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("first update seeds the state from the measurement") {
    ekf_state st;
    ekf_measurement z{std::cos(0.7), std::sin(0.7), 0.004};
    ekf_update(st, z);
    CHECK(st.initialized);
    CHECK(st.phi == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(st.eps_f == doctest::Approx(0.004).epsilon(1e-14));
    CHECK(st.covariance[0][0] == st.measurement_noise[0][0]);
    CHECK(st.covariance[1][1] == st.measurement_noise[2][2]);
    CHECK(st.covariance[0][1] == 0.0);
}

TEST_CASE("updates with a repeated measurement keep the state and shrink variance") {
    ekf_state st;
    ekf_measurement z{std::cos(-1.2), std::sin(-1.2), 0.002};
    ekf_update(st, z);
    double p0 = st.covariance[0][0];
    for (int i = 0; i < 50; ++i) {
        double prev = st.covariance[0][0];
        ekf_update(st, z);
        CHECK(st.covariance[0][0] <= prev + 1e-15);
        CHECK(st.covariance[0][1] == st.covariance[1][0]); // symmetry kept
    }
    CHECK(st.phi == doctest::Approx(-1.2).epsilon(1e-12));
    CHECK(st.eps_f == doctest::Approx(0.002).epsilon(1e-12));
    CHECK(st.covariance[0][0] < p0 / 10.0);
    CHECK(st.covariance[0][0] > 0.0);
    CHECK(st.covariance[1][1] > 0.0);
}

TEST_CASE("update pulls the phase toward the measured direction") {
    ekf_state st;
    ekf_update(st, ekf_measurement{1.0, 0.0, 0.0}); // seed at phi = 0
    ekf_update(st, ekf_measurement{std::cos(0.1), std::sin(0.1), 0.0});
    CHECK(st.phi > 0.0);
    CHECK(st.phi < 0.1);
}

TEST_CASE("non-finite measurements are rejected") {
    ekf_state st;
    ekf_measurement bad{std::nan(""), 0.0, 0.0};
    CHECK_THROWS_AS(ekf_update(st, bad), std::invalid_argument);
}

TEST_CASE("cfo compensation inverts the channel rotation") {
    complex_signal r = rx_window(2500.0, 0.0, 0, 1, 0.0);
    complex_signal plain = rx_window(0.0, 0.0, 0, 1, 0.0);
    double eps = 2.0 * M_PI * 2500.0 * 1e-6;
    complex_signal fixed = compensate_cfo(r, eps, 0.0, false);
    for (int n = 0; n < 630; ++n) CHECK(std::abs(fixed.samples[n] - plain.samples[n]) < 1e-12);
    // static phase removal on request
    complex_signal rot = compensate_cfo(plain, 0.0, 0.5, true);
    for (int n = 0; n < 630; ++n)
        CHECK(std::abs(rot.samples[n] - plain.samples[n] * std::polar(1.0, -0.5)) < 1e-12);
}

TEST_CASE("fractional delay estimate is exact on the dictionary grid") {
    preamble_spec spec;
    auto dict = delayed_zc_dictionary(spec, 16, interp_kernel::hann_sinc);
    const double zeta = 13.0 / 34.0; // grid entry of the 17-point bank
    complex_signal r = rx_window(0.0, 40.0 + zeta, 0, 1, 0.0);
    CHECK(estimate_fractional_delay(r, 40, spec, dict) == doctest::Approx(zeta).epsilon(1e-12));
}

TEST_CASE("zero fractional delay resolves to zero when the grid contains it") {
    preamble_spec spec;
    auto dict = delayed_zc_dictionary(spec, 3, interp_kernel::hann_sinc);
    complex_signal r = rx_window(0.0, 12.0, 0, 1, 0.0);
    CHECK(estimate_fractional_delay(r, 12, spec, dict) == 0.0);
}

TEST_CASE("zero fractional delay ties break toward the smaller magnitude entry") {
    // the even-count grid has no zero; +-1/34 tie and the earlier (negative)
    // entry of the two equal-magnitude candidates wins
    preamble_spec spec;
    auto d16 = delayed_zc_dictionary(spec, 16, interp_kernel::hann_sinc);
    complex_signal r = rx_window(0.0, 12.0, 0, 1, 0.0);
    double z = estimate_fractional_delay(r, 12, spec, d16);
    CHECK(std::abs(z) == doctest::Approx(1.0 / 34.0).epsilon(1e-12));
}

TEST_CASE("single-shot synchronize recovers delay, fraction, and cfo") {
    preamble_spec spec;
    auto dict = delayed_zc_dictionary(spec, 16, interp_kernel::hann_sinc);
    const double zeta = 13.0 / 34.0;
    complex_signal r = rx_window(1200.0, 25.0 + zeta, 200, 3, 0.0, 0.35);
    sync_estimate est = synchronize(r, spec, gamma_detector(), dict, 1e-4, nullptr, 0);
    REQUIRE(est.detected);
    CHECK(est.d_hat == 225);
    CHECK(est.zeta_hat == doctest::Approx(zeta).epsilon(1e-12));
    CHECK(est.eps_f_hat / (2.0 * M_PI * 1e-6) == doctest::Approx(1200.0).epsilon(1e-6));
    // the fraction splits correlation energy between adjacent integer lags,
    // so the peak sits well below the aligned value 39690 but stays decisive
    CHECK(est.peak_value > 20000.0);
}

TEST_CASE("synchronize under noise stays within the coarse tolerances") {
    preamble_spec spec;
    auto dict = delayed_zc_dictionary(spec, 16, interp_kernel::hann_sinc);
    const double true_delay = 25.3;
    complex_signal r = rx_window(1200.0, true_delay, 300, 9, 0.01);
    sync_estimate est = synchronize(r, spec, gamma_detector(), dict, 0.01, nullptr, 0);
    REQUIRE(est.detected);
    double resid_ts = (300.0 + true_delay) - (est.d_hat + est.zeta_hat);
    CHECK(std::abs(resid_ts) < 0.125);
    CHECK(std::abs(est.eps_f_hat / (2.0 * M_PI * 1e-6) - 1200.0) < 15.0);
}

TEST_CASE("tracking across frames threads the filter and stays initialized") {
    preamble_spec spec;
    auto dict = delayed_zc_dictionary(spec, 16, interp_kernel::hann_sinc);
    ekf_state ekf;
    sync_estimate first, second;
    const long long n_cyc = 10000;
    const double eps_true = 2.0 * M_PI * 900.0 * 1e-6;
    for (int k = 0; k < 2; ++k) {
        // carrier phase accumulates across the frame gap
        double theta = wrap_phase(eps_true * static_cast<double>(n_cyc) * k);
        complex_signal r = rx_window(900.0, 10.0, 200, derive_seed(21, 0xF3, k), 0.01, theta);
        sync_estimate est =
            synchronize(r, spec, gamma_detector(), dict, 0.01, &ekf, k == 0 ? 0 : n_cyc);
        (k == 0 ? first : second) = est;
    }
    REQUIRE(first.detected);
    REQUIRE(second.detected);
    CHECK(ekf.initialized);
    CHECK(std::abs(second.eps_f_hat / (2.0 * M_PI * 1e-6) - 900.0) < 10.0);
}

TEST_CASE("no detection leaves the filter untouched") {
    preamble_spec spec;
    auto dict = delayed_zc_dictionary(spec, 16, interp_kernel::hann_sinc);
    complex_signal noise;
    noise.sample_duration = 1e-6;
    rng g(33);
    noise.samples.resize(2000);
    for (auto& x : noise.samples) x = g.complex_gaussian(0.01);
    ekf_state ekf;
    detector_config cfg = gamma_detector();
    cfg.target_pfa = 1e-9;
    sync_estimate est = synchronize(noise, spec, cfg, dict, 0.01, &ekf, 0);
    CHECK_FALSE(est.detected);
    CHECK_FALSE(ekf.initialized);
}
