#include "distsync/rng.hpp"

#include <cmath>

namespace distsync {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t master, uint64_t salt, uint64_t position) {
    return splitmix64(splitmix64(master ^ salt) + position);
}

double rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0,1]: guard the log; u2 in [0,1)
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
}

std::complex<double> rng::complex_gaussian(double variance) {
    double s = std::sqrt(variance / 2.0);
    double re = gaussian();
    double im = gaussian();
    return {s * re, s * im};
}

} // namespace distsync
