#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "distsync/kernel.hpp"
#include "doctest.h"

using namespace distsync;

TEST_CASE("both kernels interpolate: unit tap at zero, zeros at other integers") {
    for (auto k : {interp_kernel::hann_sinc, interp_kernel::linear}) {
        CHECK(kernel_tap(k, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
        for (int i = 1; i <= kernel_half_span(k); ++i) {
            CHECK(std::abs(kernel_tap(k, static_cast<double>(i))) < 1e-15);
            CHECK(std::abs(kernel_tap(k, static_cast<double>(-i))) < 1e-15);
        }
    }
}

TEST_CASE("taps vanish outside the declared half span") {
    CHECK(kernel_half_span(interp_kernel::hann_sinc) == 8);
    CHECK(kernel_half_span(interp_kernel::linear) == 1);
    CHECK(kernel_tap(interp_kernel::hann_sinc, 8.0) == 0.0);
    CHECK(kernel_tap(interp_kernel::hann_sinc, -8.3) == 0.0);
    CHECK(kernel_tap(interp_kernel::linear, 1.0) == 0.0);
    CHECK(kernel_tap(interp_kernel::linear, -1.5) == 0.0);
}

TEST_CASE("taps are even in the offset") {
    for (auto k : {interp_kernel::hann_sinc, interp_kernel::linear})
        for (double t : {0.1, 0.25, 0.5, 0.9, 1.7, 4.3, 7.9})
            CHECK(kernel_tap(k, t) == doctest::Approx(kernel_tap(k, -t)).epsilon(1e-15));
}

TEST_CASE("spot values: triangle at quarter sample, windowed sinc at half sample") {
    CHECK(kernel_tap(interp_kernel::linear, 0.25) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(kernel_tap(interp_kernel::hann_sinc, 0.5) ==
          doctest::Approx(0.6305035371596802).epsilon(1e-12));
}

TEST_CASE("windowed sinc delays a slow complex tone with small error") {
    // linear convolution against an exact fractionally shifted tone
    const double f = 0.05, zeta = 0.3;
    const int n = 96, h = kernel_half_span(interp_kernel::hann_sinc);
    std::vector<std::complex<double>> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = std::polar(1.0, 2.0 * M_PI * f * i);
    double worst = 0.0;
    for (int i = h + 1; i < n - h - 1; ++i) {
        std::complex<double> acc = 0.0;
        for (int k = -h; k <= h; ++k)
            acc += x[i - k] * kernel_tap(interp_kernel::hann_sinc, k - zeta);
        std::complex<double> want = std::polar(1.0, 2.0 * M_PI * f * (i - zeta));
        worst = std::max(worst, std::abs(acc - want));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("kernel names round-trip and unknown names are rejected") {
    CHECK(kernel_from_name("hann_sinc") == interp_kernel::hann_sinc);
    CHECK(kernel_from_name("linear") == interp_kernel::linear);
    CHECK(kernel_from_name(kernel_name(interp_kernel::hann_sinc)) == interp_kernel::hann_sinc);
    CHECK_THROWS_AS(kernel_from_name("cubic"), std::invalid_argument);
}
