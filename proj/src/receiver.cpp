#include "distsync/receiver.hpp"

#include <cmath>
#include <stdexcept>

namespace distsync {

namespace {

mat2 mat2_mul(const mat2& a, const mat2& b) {
    mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

mat2 mat2_add(const mat2& a, const mat2& b) {
    mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

mat2 mat2_transpose(const mat2& a) {
    return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}};
}

void symmetrize(mat2& p) {
    double off = 0.5 * (p[0][1] + p[1][0]);
    p[0][1] = off;
    p[1][0] = off;
}

// inverse of a symmetric 3x3 via the adjugate; throws when near-singular
mat3 mat3_inverse(const mat3& a) {
    double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                 a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                 a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(a[i][j]));
    if (std::abs(det) <= 1e-18 * scale * scale * scale)
        throw std::runtime_error("ekf_update: singular innovation covariance");
    mat3 inv{};
    inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
    inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
    inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
    inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
    inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
    inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
    inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
    inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
    inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    return inv;
}

} // namespace

double wrap_phase(double phi) {
    // into (-pi, pi]
    double w = std::remainder(phi, 2.0 * M_PI);
    if (w <= -M_PI) w += 2.0 * M_PI;
    return w;
}

double estimate_cfo_oneshot(const complex_signal& r, int d_hat, const preamble_spec& spec) {
    validate(spec);
    const int n_zc = spec.n_zc;
    const int n_prod = (spec.m_rep - 1) * n_zc;
    require(spec.m_rep >= 2, "estimate_cfo_oneshot: needs at least two repetitions");
    require(d_hat >= 0 && d_hat + spec.preamble_len() <= static_cast<int>(r.samples.size()),
            "estimate_cfo_oneshot: window out of range");
    cplx acc{0.0, 0.0};
    for (int n = 0; n < n_prod; ++n)
        acc += r.samples[static_cast<size_t>(d_hat + n_zc + n)] *
               std::conj(r.samples[static_cast<size_t>(d_hat + n)]);
    if (acc == cplx{0.0, 0.0})
        throw std::domain_error("estimate_cfo_oneshot: zero correlation (degenerate input)");
    return std::atan2(acc.imag(), acc.real()) / static_cast<double>(n_zc);
}

void ekf_predict(ekf_state& st, long long n_cyc) {
    require(n_cyc >= 1, "ekf_predict: n_cyc must be >= 1");
    const double n = static_cast<double>(n_cyc);
    st.phi = wrap_phase(st.phi + n * st.eps_f);
    const mat2 f{{{1.0, n}, {0.0, 1.0}}};
    st.covariance = mat2_add(mat2_mul(mat2_mul(f, st.covariance), mat2_transpose(f)),
                             st.process_noise);
    symmetrize(st.covariance);
}

void ekf_update(ekf_state& st, const ekf_measurement& z) {
    require(std::isfinite(z.cos_phi) && std::isfinite(z.sin_phi) && std::isfinite(z.eps_f),
            "ekf_update: non-finite measurement");
    if (!st.initialized) {
        // seed from the first observation; a wide prior would leak into eps
        // through the n_cyc cross term on the first predict
        st.phi = std::atan2(z.sin_phi, z.cos_phi);
        st.eps_f = z.eps_f;
        st.covariance = {{{st.measurement_noise[0][0], 0.0}, {0.0, st.measurement_noise[2][2]}}};
        st.initialized = true;
        return;
    }

    const double c = std::cos(st.phi), s = std::sin(st.phi);
    // H = dg/dx with g(x) = [cos phi, sin phi, eps]
    const double h[3][2] = {{-s, 0.0}, {c, 0.0}, {0.0, 1.0}};
    const double innov[3] = {z.cos_phi - c, z.sin_phi - s, z.eps_f - st.eps_f};

    const mat2& p = st.covariance;
    // ph = P H^T (2x3)
    double ph[2][3];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) ph[i][j] = p[i][0] * h[j][0] + p[i][1] * h[j][1];
    // sm = H P H^T + R (3x3)
    mat3 sm = st.measurement_noise;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) sm[i][j] += h[i][0] * ph[0][j] + h[i][1] * ph[1][j];
    const mat3 sinv = mat3_inverse(sm);
    // k = P H^T S^-1 (2x3)
    double k[2][3];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            k[i][j] = ph[i][0] * sinv[0][j] + ph[i][1] * sinv[1][j] + ph[i][2] * sinv[2][j];

    st.phi = wrap_phase(st.phi + k[0][0] * innov[0] + k[0][1] * innov[1] + k[0][2] * innov[2]);
    st.eps_f += k[1][0] * innov[0] + k[1][1] * innov[1] + k[1][2] * innov[2];

    // Joseph form: P <- (I - K H) P (I - K H)^T + K R K^T, then symmetrize
    mat2 ikh{{{1.0, 0.0}, {0.0, 1.0}}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            ikh[i][j] -= k[i][0] * h[0][j] + k[i][1] * h[1][j] + k[i][2] * h[2][j];
    mat2 p1 = mat2_mul(mat2_mul(ikh, st.covariance), mat2_transpose(ikh));
    // krk = K R K^T
    double kr[2][3];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            kr[i][j] = k[i][0] * st.measurement_noise[0][j] + k[i][1] * st.measurement_noise[1][j] +
                       k[i][2] * st.measurement_noise[2][j];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            p1[i][j] += kr[i][0] * k[j][0] + kr[i][1] * k[j][1] + kr[i][2] * k[j][2];
    symmetrize(p1);
    st.covariance = p1;
}

complex_signal compensate_cfo(const complex_signal& r, double eps_f_hat, double phi_hat,
                              bool apply_phase) {
    complex_signal out;
    out.sample_duration = r.sample_duration;
    out.samples.resize(r.samples.size());
    const cplx static_rot =
        apply_phase ? cplx{std::cos(-phi_hat), std::sin(-phi_hat)} : cplx{1.0, 0.0};
    for (size_t n = 0; n < r.samples.size(); ++n) {
        double ph = -eps_f_hat * static_cast<double>(n);
        out.samples[n] = r.samples[n] * cplx{std::cos(ph), std::sin(ph)} * static_rot;
    }
    return out;
}

double estimate_fractional_delay(const complex_signal& r_tilde, int d_hat,
                                 const preamble_spec& spec, const zc_dictionary& dict) {
    validate(spec);
    require(!dict.zetas.empty(), "estimate_fractional_delay: empty dictionary");
    require(d_hat >= 0 && d_hat + spec.preamble_len() <= static_cast<int>(r_tilde.samples.size()),
            "estimate_fractional_delay: window out of range");

    double best_v = -1.0, best_zeta = 0.0;
    bool have = false;
    for (size_t i = 0; i < dict.zetas.size(); ++i) {
        const auto& rep = dict.replicas[i];
        require(static_cast<int>(rep.size()) == spec.n_zc,
                "estimate_fractional_delay: replica length mismatch");
        double v = 0.0;
        for (int m = 0; m < spec.m_rep; ++m) {
            cplx acc{0.0, 0.0};
            const int base = d_hat + m * spec.n_zc;
            for (int n = 0; n < spec.n_zc; ++n)
                acc += std::conj(r_tilde.samples[static_cast<size_t>(base + n)]) *
                       rep[static_cast<size_t>(n)];
            v += std::norm(acc);
        }
        v /= dict.energies[i]; // unequal replica energies must not bias the argmax
        // mathematical ties (symmetric noiseless cases) resolve toward smaller
        // |zeta|; the relative band only fires on rounding-level differences
        const bool tie = have && std::abs(v - best_v) <= 1e-9 * std::max(v, best_v);
        if (!have || (tie && std::abs(dict.zetas[i]) < std::abs(best_zeta)) ||
            (!tie && v > best_v)) {
            best_v = v;
            best_zeta = dict.zetas[i];
            have = true;
        }
    }
    return best_zeta;
}

sync_estimate synchronize(const complex_signal& r, const preamble_spec& spec,
                          const detector_config& cfg, const zc_dictionary& dict,
                          double noise_power, ekf_state* ekf, long long n_cyc) {
    sync_estimate est;
    const detection_result det = detect_and_integer_delay(r, spec, cfg, noise_power);
    if (!det.detected) return est;

    est.detected = true;
    est.d_hat = det.d_hat;
    est.peak_value = det.peak;

    const double eps_one = estimate_cfo_oneshot(r, det.d_hat, spec);
    const cplx peak_sample = r.samples[static_cast<size_t>(det.d_hat)];
    const double amp = std::abs(peak_sample);
    if (amp == 0.0) throw std::domain_error("synchronize: zero peak sample");
    const ekf_measurement meas{peak_sample.real() / amp, peak_sample.imag() / amp, eps_one};

    if (ekf != nullptr) {
        if (ekf->initialized && n_cyc >= 1) ekf_predict(*ekf, n_cyc);
        ekf_update(*ekf, meas);
        est.eps_f_hat = ekf->eps_f;
        est.phi_hat = ekf->phi;
    } else {
        est.eps_f_hat = eps_one;
        est.phi_hat = std::atan2(meas.sin_phi, meas.cos_phi);
    }

    const complex_signal r_tilde = compensate_cfo(r, est.eps_f_hat, est.phi_hat, false);
    est.zeta_hat = estimate_fractional_delay(r_tilde, det.d_hat, spec, dict);
    return est;
}

} // namespace distsync
