#pragma once
#include <vector>

#include "distsync/kernel.hpp"
#include "distsync/signal.hpp"

namespace distsync {

// M-fold repetition of a length-n_zc Zadoff-Chu sequence, sampled at ts.
struct preamble_spec {
    int n_zc = 63;   // sequence length, odd
    int root = 25;   // ZC root, coprime with n_zc
    int m_rep = 10;  // repetitions
    double ts = 1e-6;

    int preamble_len() const { return n_zc * m_rep; }
    double t_est() const { return static_cast<double>(preamble_len()) * ts; }
};

void validate(const preamble_spec& spec);

// s[n] = exp(-j*pi*root*n*(n+1)/n_zc), unit modulus; odd n_zc makes the cyclic
// autocorrelation exactly n_zc at lag 0 and 0 elsewhere.
std::vector<cplx> zc_sequence(int n_zc, int root);

// the full transmitted sync preamble: m_rep back-to-back copies of the sequence
complex_signal build_preamble(const preamble_spec& spec);

// one replica per fractional delay on the grid
// zeta_i = -1/2 + i/(n_zeta+1), i = 0..n_zeta (units of ts)
struct zc_dictionary {
    std::vector<double> zetas;
    std::vector<std::vector<cplx>> replicas; // each length n_zc
    std::vector<double> energies;            // per-replica |.|^2 sums
};

// replicas are cyclically interpolated: rep[n] = sum_k s[(n-k) mod n_zc] * tap(k - zeta)
zc_dictionary delayed_zc_dictionary(const preamble_spec& spec, int n_zeta, interp_kernel kernel);

// cyclic fractional delay of one sequence period (used by the dictionary and tests)
std::vector<cplx> cyclic_delay(const std::vector<cplx>& s, double zeta, interp_kernel kernel);

} // namespace distsync
