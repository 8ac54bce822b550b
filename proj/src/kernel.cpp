#include "distsync/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace distsync {

namespace {
constexpr int hann_sinc_half_span = 8;

double sinc(double x) {
    if (x == 0.0) return 1.0;
    double px = M_PI * x;
    return std::sin(px) / px;
}
} // namespace

double kernel_tap(interp_kernel k, double tau) {
    switch (k) {
    case interp_kernel::hann_sinc: {
        double a = std::abs(tau);
        if (a >= hann_sinc_half_span) return 0.0;
        return sinc(tau) * 0.5 * (1.0 + std::cos(M_PI * tau / hann_sinc_half_span));
    }
    case interp_kernel::linear: {
        double a = std::abs(tau);
        return a >= 1.0 ? 0.0 : 1.0 - a;
    }
    }
    return 0.0;
}

int kernel_half_span(interp_kernel k) {
    return k == interp_kernel::hann_sinc ? hann_sinc_half_span : 1;
}

interp_kernel kernel_from_name(const std::string& name) {
    if (name == "hann_sinc") return interp_kernel::hann_sinc;
    if (name == "linear") return interp_kernel::linear;
    throw std::invalid_argument("unknown interpolation kernel: " + name);
}

const char* kernel_name(interp_kernel k) {
    return k == interp_kernel::hann_sinc ? "hann_sinc" : "linear";
}

} // namespace distsync
