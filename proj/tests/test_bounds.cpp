#include <cmath>
#include <stdexcept>

#include "distsync/bounds.hpp"
#include "doctest.h"

using namespace distsync;

namespace {
const crlb_inputs defaults{630e-6, 100.0, 1e-6}; // 630 samples at 1 MHz, 20 dB
} // namespace

TEST_CASE("cfo bound at the default operating point") {
    double var = crlb_cfo_variance(defaults);
    CHECK(std::sqrt(var) == doctest::Approx(61.8806985106).epsilon(1e-9));
}

TEST_CASE("sto bound at the default operating point") {
    double var = crlb_sto_variance(defaults);
    CHECK(var == doctest::Approx(5.98398600684e-16).epsilon(1e-9));
    CHECK(std::sqrt(var) / defaults.ts == doctest::Approx(0.0244621871607).epsilon(1e-9));
}

TEST_CASE("bounds scale inversely with snr and with the advertised time powers") {
    crlb_inputs twice = defaults;
    twice.snr_sync *= 2.0;
    CHECK(crlb_cfo_variance(twice) == doctest::Approx(crlb_cfo_variance(defaults) / 2).epsilon(1e-12));
    CHECK(crlb_sto_variance(twice) == doctest::Approx(crlb_sto_variance(defaults) / 2).epsilon(1e-12));

    crlb_inputs longer = defaults;
    longer.t_est *= 3.0;
    // cfo variance falls with t^2, sto variance with t
    CHECK(crlb_cfo_variance(longer) == doctest::Approx(crlb_cfo_variance(defaults) / 9).epsilon(1e-12));
    CHECK(crlb_sto_variance(longer) == doctest::Approx(crlb_sto_variance(defaults) / 3).epsilon(1e-12));
}

TEST_CASE("non-positive inputs are rejected") {
    crlb_inputs bad = defaults;
    bad.t_est = 0.0;
    CHECK_THROWS_AS(crlb_cfo_variance(bad), std::invalid_argument);
    bad = defaults;
    bad.snr_sync = -1.0;
    CHECK_THROWS_AS(crlb_sto_variance(bad), std::invalid_argument);
    bad = defaults;
    bad.ts = 0.0;
    CHECK_THROWS_AS(crlb_sto_variance(bad), std::invalid_argument);
}
