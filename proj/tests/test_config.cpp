#include <cmath>
#include <stdexcept>

#include "distsync/config.hpp"
#include "doctest.h"

using namespace distsync;

TEST_CASE("defaults form a valid operating point") {
    config cfg;
    CHECK_NOTHROW(validate(cfg));
    CHECK(cfg.noise_power() == doctest::Approx(0.01).epsilon(1e-12)); // 20 dB, unit signal
    CHECK(cfg.preamble().preamble_len() == 630);
    CHECK(cfg.preamble().ts == doctest::Approx(1e-6).epsilon(1e-15));
    CHECK(parse_config_file("defaults").n_zc == 63);
}

TEST_CASE("key=value lines override single fields with comments and blanks ignored") {
    config cfg = parse_config_text("# campaign tweak\n"
                                   "channel.snr_db = 14.5\n"
                                   "\n"
                                   "schedule.n_frames=25   # short run\n"
                                   "detector.mode=gamma\n"
                                   "preamble.kernel=linear\n"
                                   "ekf.enabled=false\n");
    CHECK(cfg.snr_db == 14.5);
    CHECK(cfg.n_frames == 25);
    CHECK(cfg.detector.mode == detector_mode::noise_floor_gamma);
    CHECK(cfg.kernel == interp_kernel::linear);
    CHECK_FALSE(cfg.ekf_enabled);
    CHECK(cfg.cfo_hz == 1200.0); // untouched defaults stay
}

TEST_CASE("unknown keys are rejected by name") {
    try {
        parse_config_text("channel.snr=20\n");
        FAIL("expected an unknown-key error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("channel.snr") != std::string::npos);
    }
}

TEST_CASE("malformed values and lines carry the offending content") {
    CHECK_THROWS_AS(parse_config_text("channel.snr_db=abc\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("schedule.n_frames=2.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("ekf.enabled=maybe\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("just a line\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("=5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("detector.mode=median\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("preamble.kernel=spline\n"), std::invalid_argument);
}

TEST_CASE("cross-field validation rejects impossible operating points") {
    // cfo beyond the one-shot unwrap range 1/(2 n_zc ts)
    CHECK_THROWS_AS(parse_config_text("channel.cfo_hz=8000\n"), std::invalid_argument);
    CHECK_NOTHROW(parse_config_text("channel.cfo_hz=7900\n"));
    // frame shorter than preamble plus guard
    CHECK_THROWS_AS(parse_config_text("schedule.t_frame_ms=4.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("preamble.n_zc=64\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("preamble.root=21\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("schedule.n_frames=0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("dbf.sweep_kind=phase\n"), std::invalid_argument);
}

TEST_CASE("comma lists parse into sweep axes") {
    config cfg = parse_config_text("dbf.sweep_sizes=2, 4, 16\n"
                                   "dbf.sweep_levels=0,5,12.5\n"
                                   "dbf.sweep_kind=timing\n"
                                   "dbf.rms_timing_ts=0\n");
    REQUIRE(cfg.dbf_sweep_sizes.size() == 3);
    CHECK(cfg.dbf_sweep_sizes[2] == 16);
    REQUIRE(cfg.dbf_sweep_levels.size() == 3);
    CHECK(cfg.dbf_sweep_levels[2] == 12.5);
    CHECK(cfg.dbf_sweep_kind == "timing");
    CHECK_THROWS_AS(parse_config_text("dbf.sweep_sizes=\n"), std::invalid_argument);
}

TEST_CASE("filter measurement noise defaults to the cfo bound at the configured snr") {
    config cfg;
    ekf_state st = cfg.make_ekf_state();
    // 61.88 Hz bound at 20 dB in (rad/sample)^2
    CHECK(st.measurement_noise[2][2] == doctest::Approx(1.51171e-7).epsilon(1e-4));
    CHECK(st.measurement_noise[0][0] == 0.05);
    CHECK(st.process_noise[0][0] == 1e-6);
    CHECK(st.process_noise[1][1] == 1e-10);
    CHECK_FALSE(st.initialized);

    config worse = parse_config_text("channel.snr_db=14\n");
    ekf_state st2 = worse.make_ekf_state();
    // 6 dB worse snr doubles the variance twice
    CHECK(st2.measurement_noise[2][2] ==
          doctest::Approx(st.measurement_noise[2][2] * std::pow(10.0, 0.6)).epsilon(1e-9));

    config pinned = parse_config_text("ekf.meas_noise_eps=3e-7\n");
    CHECK(pinned.make_ekf_state().measurement_noise[2][2] == 3e-7);
}

TEST_CASE("detector noise power override flows through the config") {
    config cfg = parse_config_text("detector.noise_power=0.125\n");
    CHECK(cfg.noise_power_override == 0.125);
    CHECK(config{}.noise_power_override < 0.0); // unset means derive from snr
}

TEST_CASE("unused hardware hooks are accepted and validated") {
    config cfg = parse_config_text("channel.clock_skew_ppm=2.5\n"
                                   "schedule.timer_jitter_samples=0.5\n");
    CHECK(cfg.clock_skew_ppm == 2.5);
    CHECK(cfg.timer_jitter_samples == 0.5);
    CHECK_THROWS_AS(parse_config_text("schedule.timer_jitter_samples=-1\n"),
                    std::invalid_argument);
}

TEST_CASE("missing config files fail with the path in the message") {
    try {
        parse_config_file("/tmp/distsync_missing.cfg");
        FAIL("expected an open error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("/tmp/distsync_missing.cfg") != std::string::npos);
    }
}
