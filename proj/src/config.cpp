#include "distsync/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "distsync/bounds.hpp"
#include "distsync/channel.hpp"

namespace distsync {

double config::noise_power() const { return std::pow(10.0, -snr_db / 10.0); }

preamble_spec config::preamble() const {
    preamble_spec spec;
    spec.n_zc = n_zc;
    spec.root = root;
    spec.m_rep = m_rep;
    spec.ts = ts();
    return spec;
}

ekf_state config::make_ekf_state() const {
    ekf_state st;
    st.process_noise = {{{ekf_q_phi, 0.0}, {0.0, ekf_q_eps}}};
    double r_eps = ekf_r_eps;
    if (r_eps < 0.0) {
        // one-shot CFO variance bound at the configured SNR, in (rad/sample)^2
        crlb_inputs in{preamble().t_est(), std::pow(10.0, snr_db / 10.0), ts()};
        double w = 2.0 * std::acos(-1.0) * ts();
        r_eps = crlb_cfo_variance(in) * w * w;
    }
    st.measurement_noise = {{{ekf_r_cos, 0.0, 0.0}, {0.0, ekf_r_sin, 0.0}, {0.0, 0.0, r_eps}}};
    return st;
}

void validate(const config& cfg) {
    validate(cfg.preamble());
    require(cfg.n_zeta >= 1, "preamble.n_zeta must be >= 1");
    require(cfg.sample_rate_hz > 0.0, "channel.sample_rate_hz must be > 0");
    require(std::abs(cfg.cfo_hz) < cfo_unwrap_limit_hz(cfg.n_zc, cfg.ts()),
            "channel.cfo_hz outside the unambiguous one-shot range 1/(2*n_zc*ts)");
    require(cfg.delay_ts >= 0.0, "channel.delay_ts must be >= 0");
    require(cfg.drift_hz_per_s >= 0.0, "channel.drift_hz_per_s must be >= 0");
    require(cfg.t_guard_ms >= 0.0, "schedule.t_guard_ms must be >= 0");
    require(cfg.t_frame_ms > 0.0, "schedule.t_frame_ms must be > 0");
    double t_sync_ms = cfg.preamble().t_est() * 1e3;
    require(cfg.t_frame_ms >= t_sync_ms + cfg.t_guard_ms,
            "schedule.t_frame_ms shorter than preamble plus guard");
    require(cfg.n_frames >= 1, "schedule.n_frames must be >= 1");
    require(cfg.lead_samples >= 0, "schedule.lead_samples must be >= 0");
    require(cfg.timer_jitter_samples >= 0.0, "schedule.timer_jitter_samples must be >= 0");
    validate(cfg.detector);
    require(cfg.ekf_q_phi >= 0.0 && cfg.ekf_q_eps >= 0.0, "ekf process noise must be >= 0");
    require(cfg.ekf_r_cos > 0.0 && cfg.ekf_r_sin > 0.0, "ekf phase measurement noise must be > 0");
    validate(cfg.dbf);
    require(cfg.dbf_sweep_kind == "freq" || cfg.dbf_sweep_kind == "timing",
            "dbf.sweep_kind must be freq or timing");
    require(!cfg.dbf_sweep_sizes.empty(), "dbf.sweep_sizes must be non-empty");
    for (int n : cfg.dbf_sweep_sizes) require(n >= 1, "dbf.sweep_sizes entries must be >= 1");
    for (double v : cfg.dbf_sweep_levels) require(v >= 0.0, "dbf.sweep_levels entries must be >= 0");
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing garbage");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not a number: '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing garbage");
        return static_cast<int>(x);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not an integer: '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw std::invalid_argument("config key " + key + ": not a boolean: '" + v + "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& v, F item) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(item(key, tok));
    }
    if (out.empty()) throw std::invalid_argument("config key " + key + ": empty list");
    return out;
}

void apply_key(config& cfg, const std::string& key, const std::string& v) {
    if (key == "preamble.n_zc") cfg.n_zc = parse_int(key, v);
    else if (key == "preamble.root") cfg.root = parse_int(key, v);
    else if (key == "preamble.m_rep") cfg.m_rep = parse_int(key, v);
    else if (key == "preamble.n_zeta") cfg.n_zeta = parse_int(key, v);
    else if (key == "preamble.kernel") cfg.kernel = kernel_from_name(v);
    else if (key == "channel.sample_rate_hz") cfg.sample_rate_hz = parse_double(key, v);
    else if (key == "channel.snr_db") cfg.snr_db = parse_double(key, v);
    else if (key == "channel.cfo_hz") cfg.cfo_hz = parse_double(key, v);
    else if (key == "channel.delay_ts") cfg.delay_ts = parse_double(key, v);
    else if (key == "channel.h0_phase_rad") cfg.h0_phase_rad = parse_double(key, v);
    else if (key == "channel.drift_hz_per_s") cfg.drift_hz_per_s = parse_double(key, v);
    else if (key == "channel.clock_skew_ppm") cfg.clock_skew_ppm = parse_double(key, v);
    else if (key == "schedule.t_guard_ms") cfg.t_guard_ms = parse_double(key, v);
    else if (key == "schedule.t_frame_ms") cfg.t_frame_ms = parse_double(key, v);
    else if (key == "schedule.n_frames") cfg.n_frames = parse_int(key, v);
    else if (key == "schedule.lead_samples") cfg.lead_samples = parse_int(key, v);
    else if (key == "schedule.timer_jitter_samples") cfg.timer_jitter_samples = parse_double(key, v);
    else if (key == "detector.mode") {
        if (v == "cfar" || v == "cfar_moving_average")
            cfg.detector.mode = detector_mode::cfar_moving_average;
        else if (v == "gamma" || v == "noise_floor_gamma")
            cfg.detector.mode = detector_mode::noise_floor_gamma;
        else
            throw std::invalid_argument("config key detector.mode: unknown mode '" + v + "'");
    } else if (key == "detector.cfar_factor") cfg.detector.cfar_factor = parse_double(key, v);
    else if (key == "detector.cfar_window") cfg.detector.cfar_window = parse_int(key, v);
    else if (key == "detector.target_pfa") cfg.detector.target_pfa = parse_double(key, v);
    else if (key == "detector.noise_power") cfg.noise_power_override = parse_double(key, v);
    else if (key == "ekf.enabled") cfg.ekf_enabled = parse_bool(key, v);
    else if (key == "ekf.process_noise_phi") cfg.ekf_q_phi = parse_double(key, v);
    else if (key == "ekf.process_noise_eps") cfg.ekf_q_eps = parse_double(key, v);
    else if (key == "ekf.meas_noise_cos") cfg.ekf_r_cos = parse_double(key, v);
    else if (key == "ekf.meas_noise_sin") cfg.ekf_r_sin = parse_double(key, v);
    else if (key == "ekf.meas_noise_eps") cfg.ekf_r_eps = parse_double(key, v);
    else if (key == "ekf.apply_phase") cfg.apply_phase = parse_bool(key, v);
    else if (key == "dbf.n_t") cfg.dbf.n_t = parse_int(key, v);
    else if (key == "dbf.n_r") cfg.dbf.n_r = parse_int(key, v);
    else if (key == "dbf.snr_link_db") cfg.dbf.snr_link_db = parse_double(key, v);
    else if (key == "dbf.frame_ms") cfg.dbf.frame_duration_s = parse_double(key, v) * 1e-3;
    else if (key == "dbf.symbol_us") cfg.dbf.symbol_duration_s = parse_double(key, v) * 1e-6;
    else if (key == "dbf.rms_freq_hz") cfg.dbf.rms_freq_error_hz = parse_double(key, v);
    else if (key == "dbf.rms_timing_ts") cfg.dbf.rms_timing_error_ts = parse_double(key, v);
    else if (key == "dbf.n_trials") cfg.dbf.n_trials = parse_int(key, v);
    else if (key == "dbf.rolloff") cfg.dbf.pulse_rolloff = parse_double(key, v);
    else if (key == "dbf.span") cfg.dbf.pulse_span_symbols = parse_int(key, v);
    else if (key == "dbf.sweep_kind") cfg.dbf_sweep_kind = v;
    else if (key == "dbf.sweep_sizes") cfg.dbf_sweep_sizes = parse_list<int>(key, v, parse_int);
    else if (key == "dbf.sweep_levels") cfg.dbf_sweep_levels = parse_list<double>(key, v, parse_double);
    else throw std::invalid_argument("unknown config key: " + key);
}

} // namespace

config parse_config_text(const std::string& text) {
    config cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        apply_key(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

config parse_config_file(const std::string& path) {
    if (path == "defaults" || path.empty()) {
        config cfg;
        validate(cfg);
        return cfg;
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace distsync
