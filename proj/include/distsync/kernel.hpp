#pragma once
#include <string>

namespace distsync {

// Interpolation kernel for fractional-sample delay. Both choices interpolate:
// tap(0) = 1 and tap(k) = 0 at nonzero integers, so integer delays are exact.
enum class interp_kernel {
    hann_sinc, // sinc windowed by a Hann taper, support |tau| <= 8 samples
    linear,    // triangle, support |tau| <= 1
};

// tap value at offset tau (units of samples)
double kernel_tap(interp_kernel k, double tau);

// support half-width in samples (taps vanish beyond it)
int kernel_half_span(interp_kernel k);

interp_kernel kernel_from_name(const std::string& name);
const char* kernel_name(interp_kernel k);

} // namespace distsync
