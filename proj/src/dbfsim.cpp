#include "distsync/dbfsim.hpp"

#include <cmath>
#include <sstream>

#include "distsync/rng.hpp"
#include "distsync/signal.hpp"

namespace distsync {

void validate(const dbf_scenario& scn) {
    require(scn.n_t >= 1 && scn.n_r >= 1, "dbf: group sizes must be >= 1");
    require(scn.frame_duration_s > 0.0 && scn.symbol_duration_s > 0.0,
            "dbf: durations must be positive");
    require(scn.rms_freq_error_hz >= 0.0 && scn.rms_timing_error_ts >= 0.0,
            "dbf: rms errors must be non-negative");
    require(scn.n_trials >= 1, "dbf: n_trials must be >= 1");
    require(scn.pulse_rolloff >= 0.0 && scn.pulse_rolloff <= 1.0, "dbf: rolloff must be in [0,1]");
    require(scn.pulse_span_symbols >= 1, "dbf: pulse span must be >= 1");
}

double raised_cosine(double t, double rolloff, int span) {
    double a = std::abs(t);
    if (a > span) return 0.0;
    if (rolloff > 0.0) {
        double sing = 1.0 / (2.0 * rolloff);
        if (std::abs(a - sing) < 1e-9) {
            // limit at t = 1/(2 beta): (pi/4) sinc(1/(2 beta))
            double x = M_PI * sing;
            return (M_PI / 4.0) * (std::sin(x) / x);
        }
    }
    double denom = 1.0 - (2.0 * rolloff * t) * (2.0 * rolloff * t);
    double s = t == 0.0 ? 1.0 : std::sin(M_PI * t) / (M_PI * t);
    return s * std::cos(M_PI * rolloff * t) / denom;
}

double sinr_freq_error(const dbf_scenario& scn, uint64_t seed) {
    validate(scn);
    require(scn.rms_timing_error_ts == 0.0, "sinr_freq_error: timing error must be zero");
    const double snr_lin = std::pow(10.0, scn.snr_link_db / 10.0);
    const double gain = snr_lin * static_cast<double>(scn.n_t) * scn.n_t * scn.n_r;
    double acc = 0.0;
    for (long long t = 0; t < scn.n_trials; ++t) {
        rng stream(derive_seed(seed, 0xF0EAu, static_cast<uint64_t>(t)));
        // phases aligned at frame start; each node drifts to 2 pi delta T by frame end
        double re = 0.0, im = 0.0;
        for (int i = 0; i < scn.n_t; ++i) {
            double delta = scn.rms_freq_error_hz * stream.gaussian();
            double ph = 2.0 * M_PI * delta * scn.frame_duration_s;
            re += std::cos(ph);
            im += std::sin(ph);
        }
        double g = (re * re + im * im) / (static_cast<double>(scn.n_t) * scn.n_t);
        acc += gain * g;
    }
    return 10.0 * std::log10(acc / static_cast<double>(scn.n_trials));
}

double sinr_timing_error(const dbf_scenario& scn, uint64_t seed) {
    validate(scn);
    require(scn.rms_freq_error_hz == 0.0, "sinr_timing_error: freq error must be zero");
    const double snr_lin = std::pow(10.0, scn.snr_link_db / 10.0);
    const double s = snr_lin * static_cast<double>(scn.n_r);
    const int span = scn.pulse_span_symbols;
    std::vector<double> eps(static_cast<size_t>(scn.n_t));
    double acc = 0.0;
    for (long long t = 0; t < scn.n_trials; ++t) {
        rng stream(derive_seed(seed, 0x7131u, static_cast<uint64_t>(t)));
        for (auto& e : eps) e = scn.rms_timing_error_ts * stream.gaussian();
        double c0 = 0.0, isi = 0.0;
        for (int k = -span; k <= span; ++k) {
            double ck = 0.0;
            for (const double e : eps)
                ck += raised_cosine(static_cast<double>(k) - e, scn.pulse_rolloff, span);
            if (k == 0)
                c0 = ck;
            else
                isi += ck * ck;
        }
        acc += s * c0 * c0 / (s * isi + 1.0);
    }
    return 10.0 * std::log10(acc / static_cast<double>(scn.n_trials));
}

std::vector<dbf_sweep_row> sweep_requirements(const dbf_scenario& base,
                                              const std::vector<int>& group_sizes,
                                              const std::vector<double>& error_levels,
                                              const std::string& error_kind, uint64_t seed) {
    require(!group_sizes.empty() && !error_levels.empty(), "dbf sweep: empty axis");
    require(error_kind == "freq" || error_kind == "timing", "dbf sweep: kind must be freq|timing");
    std::vector<dbf_sweep_row> rows;
    for (int g : group_sizes) {
        for (double level : error_levels) {
            dbf_scenario scn = base;
            scn.n_t = g;
            scn.n_r = g;
            double sinr;
            if (error_kind == "freq") {
                scn.rms_freq_error_hz = level;
                scn.rms_timing_error_ts = 0.0;
                sinr = sinr_freq_error(scn, seed);
            } else {
                scn.rms_timing_error_ts = level;
                scn.rms_freq_error_hz = 0.0;
                sinr = sinr_timing_error(scn, seed);
            }
            rows.push_back({g, g, level, sinr, scn.n_trials});
        }
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<dbf_sweep_row>& rows) {
    std::ostringstream out;
    out.precision(12);
    out << "n_t,n_r,error_level,mean_sinr_db,trials\n";
    for (const auto& r : rows)
        out << r.n_t << "," << r.n_r << "," << r.error_level << "," << r.mean_sinr_db << ","
            << r.trials << "\n";
    return out.str();
}

} // namespace distsync
