#pragma once
#include <complex>
#include <stdexcept>
#include <vector>

namespace distsync {

using cplx = std::complex<double>;

// Baseband sample stream. sample_duration is Ts in seconds.
struct complex_signal {
    std::vector<cplx> samples;
    double sample_duration = 1e-6;
};

inline double signal_energy(const complex_signal& s) {
    double e = 0.0;
    for (const auto& x : s.samples) e += std::norm(x);
    return e;
}

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace distsync
