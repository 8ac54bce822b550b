#pragma once
#include <complex>
#include <cstdint>
#include <random>

namespace distsync {

// splitmix64 step; used to derive independent seed streams from (master, position)
// so trial ordering / parallel scheduling cannot change any drawn value.
uint64_t splitmix64(uint64_t x);

// seed for the substream at `position` under `master`; distinct salts keep
// e.g. noise and drift streams of the same frame independent.
uint64_t derive_seed(uint64_t master, uint64_t salt, uint64_t position);

// Deterministic RNG: mt19937_64 (bit-exact per the standard) + hand-rolled
// Box-Muller. std::normal_distribution is implementation-defined and would
// break bitwise reproducibility across stdlibs.
class rng {
public:
    explicit rng(uint64_t seed) : gen_(seed) {}

    // uniform on [0,1) with 53 random bits
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // standard normal; Box-Muller pair, one value cached
    double gaussian();

    // circular complex gaussian with E|w|^2 = variance
    std::complex<double> complex_gaussian(double variance);

    uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace distsync
