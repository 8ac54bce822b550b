#include "distsync/preamble.hpp"

#include <cmath>
#include <numeric>

namespace distsync {

void validate(const preamble_spec& spec) {
    require(spec.n_zc > 0 && spec.n_zc % 2 == 1, "n_zc must be positive and odd");
    require(spec.root > 0 && spec.root < spec.n_zc, "root must lie in (0, n_zc)");
    require(std::gcd(spec.root, spec.n_zc) == 1, "root must be coprime with n_zc");
    require(spec.m_rep >= 1, "m_rep must be >= 1");
    require(spec.ts > 0.0, "ts must be positive");
}

std::vector<cplx> zc_sequence(int n_zc, int root) {
    preamble_spec probe;
    probe.n_zc = n_zc;
    probe.root = root;
    validate(probe);
    std::vector<cplx> s(static_cast<size_t>(n_zc));
    for (int n = 0; n < n_zc; ++n) {
        // phase argument reduced mod 2*n_zc before the divide keeps precision
        // for long sequences (n*(n+1) grows quadratically)
        long long q = (static_cast<long long>(root) * n % (2LL * n_zc)) * (n + 1) % (2LL * n_zc);
        double phase = -M_PI * static_cast<double>(q) / n_zc;
        s[static_cast<size_t>(n)] = {std::cos(phase), std::sin(phase)};
    }
    return s;
}

complex_signal build_preamble(const preamble_spec& spec) {
    validate(spec);
    auto s = zc_sequence(spec.n_zc, spec.root);
    complex_signal out;
    out.sample_duration = spec.ts;
    out.samples.reserve(static_cast<size_t>(spec.preamble_len()));
    for (int m = 0; m < spec.m_rep; ++m)
        out.samples.insert(out.samples.end(), s.begin(), s.end());
    return out;
}

std::vector<cplx> cyclic_delay(const std::vector<cplx>& s, double zeta, interp_kernel kernel) {
    const int n = static_cast<int>(s.size());
    require(n > 0, "cyclic_delay needs a non-empty sequence");
    const int h = kernel_half_span(kernel);
    std::vector<cplx> out(static_cast<size_t>(n), cplx{0.0, 0.0});
    // taps at integer offsets k with |k - zeta| inside the kernel support
    for (int k = -h - 1; k <= h + 1; ++k) {
        double w = kernel_tap(kernel, static_cast<double>(k) - zeta);
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            int src = (i - k) % n;
            if (src < 0) src += n;
            out[static_cast<size_t>(i)] += s[static_cast<size_t>(src)] * w;
        }
    }
    return out;
}

zc_dictionary delayed_zc_dictionary(const preamble_spec& spec, int n_zeta, interp_kernel kernel) {
    validate(spec);
    require(n_zeta >= 1, "n_zeta must be >= 1");
    auto s = zc_sequence(spec.n_zc, spec.root);
    zc_dictionary dict;
    dict.zetas.reserve(static_cast<size_t>(n_zeta) + 1);
    dict.replicas.reserve(static_cast<size_t>(n_zeta) + 1);
    dict.energies.reserve(static_cast<size_t>(n_zeta) + 1);
    for (int i = 0; i <= n_zeta; ++i) {
        double zeta = -0.5 + static_cast<double>(i) / (n_zeta + 1);
        auto rep = cyclic_delay(s, zeta, kernel);
        double e = 0.0;
        for (const auto& x : rep) e += std::norm(x);
        dict.zetas.push_back(zeta);
        dict.replicas.push_back(std::move(rep));
        dict.energies.push_back(e);
    }
    return dict;
}

} // namespace distsync
