#include "distsync/harness.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "distsync/channel.hpp"
#include "distsync/rng.hpp"

namespace distsync {

namespace {
constexpr uint64_t salt_frame_noise = 0xA11CE;
constexpr uint64_t salt_drift = 0xD12F7;

const std::vector<double> cfo_tails_hz = {5.0, 10.0, 15.0};
const std::vector<double> sto_tails_ts = {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0, 2.0};
constexpr double cfo_bin_hz = 2.5;
constexpr double sto_bin_ts = 0.125;

// 17 significant digits: lossless double -> text -> double round trip
std::string fmt17(double v) {
    std::ostringstream o;
    o.precision(17);
    o << v;
    return o.str();
}
} // namespace

long long frame_schedule::n_cyc(double ts) const { return std::llround(t_frame_s / ts); }

frame_schedule make_schedule(const config& cfg) {
    validate(cfg);
    frame_schedule s;
    s.t_sync_s = cfg.preamble().t_est();
    s.t_guard_s = cfg.t_guard_ms * 1e-3;
    s.t_frame_s = cfg.t_frame_ms * 1e-3;
    s.n_frames = cfg.n_frames;
    return s;
}

error_stats compute_error_stats(const std::vector<double>& samples,
                                const std::vector<double>& tail_thresholds, double bin_width) {
    require(!samples.empty(), "error stats need at least one sample");
    require(bin_width > 0.0, "histogram bin width must be > 0");
    error_stats st;
    st.n_samples = static_cast<long long>(samples.size());
    st.bin_width = bin_width;
    double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double x : samples) sum += x;
    st.mean = sum / n;
    double ss = 0.0;
    for (double x : samples) ss += (x - st.mean) * (x - st.mean);
    st.std_dev = std::sqrt(ss / n); // population form
    for (double thr : tail_thresholds) {
        long long hits = 0;
        for (double x : samples)
            if (std::abs(x) > thr) ++hits;
        st.tail_probs.emplace_back(thr, static_cast<double>(hits) / n);
    }
    std::map<long long, long long> bins;
    for (double x : samples) ++bins[std::llround(x / bin_width)];
    for (const auto& [j, count] : bins)
        st.histogram.emplace_back(static_cast<double>(j) * bin_width, count);
    return st;
}

campaign_result run_trial_campaign(const config& cfg, uint64_t seed) {
    frame_schedule sched = make_schedule(cfg);
    preamble_spec spec = cfg.preamble();
    zc_dictionary dict = delayed_zc_dictionary(spec, cfg.n_zeta, cfg.kernel);
    double ts = cfg.ts();
    long long n_cyc = sched.n_cyc(ts);
    double sigma2 = cfg.noise_power();
    double det_np = cfg.noise_power_override >= 0.0 ? cfg.noise_power_override : sigma2;

    complex_signal txw;
    txw.sample_duration = ts;
    txw.samples.assign(static_cast<size_t>(cfg.lead_samples), cplx{0.0, 0.0});
    complex_signal pre = build_preamble(spec);
    txw.samples.insert(txw.samples.end(), pre.samples.begin(), pre.samples.end());
    int pad = kernel_half_span(cfg.kernel) + static_cast<int>(std::ceil(cfg.delay_ts)) + 2;
    require(cfg.lead_samples + spec.preamble_len() + pad >= 2 * spec.preamble_len(),
            "schedule.lead_samples too small: the detector needs two preamble lengths per window");

    ekf_state ekf = cfg.make_ekf_state();
    ekf_state* ekf_ptr = cfg.ekf_enabled ? &ekf : nullptr;

    campaign_result res;
    res.frames_total = cfg.n_frames;
    std::vector<double> cfo_resid, sto_resid;
    cfo_resid.reserve(cfg.n_frames);
    sto_resid.reserve(cfg.n_frames);

    double cfo = cfg.cfo_hz;
    double theta = 0.0; // carrier phase at the current window start
    for (int k = 0; k < cfg.n_frames; ++k) {
        if (k > 0 && cfg.drift_hz_per_s > 0.0) {
            rng dstream(derive_seed(seed, salt_drift, static_cast<uint64_t>(k)));
            cfo = oscillator_drift_step(cfo, cfg.drift_hz_per_s, sched.t_frame_s, dstream);
        }
        impairment_params p;
        p.cfo_hz = cfo;
        p.delay_ts = cfg.delay_ts;
        p.h0 = std::polar(1.0, cfg.h0_phase_rad + theta);
        p.noise_power = sigma2;
        complex_signal r = apply_impairments(
            txw, p, cfg.kernel, derive_seed(seed, salt_frame_noise, static_cast<uint64_t>(k)), pad);
        sync_estimate est =
            synchronize(r, spec, cfg.detector, dict, det_np, ekf_ptr, k == 0 ? 0 : n_cyc);

        frame_record rec;
        rec.frame_index = k;
        rec.detected = est.detected;
        rec.true_cfo_hz = cfo;
        rec.true_delay_ts = static_cast<double>(cfg.lead_samples) + cfg.delay_ts;
        if (est.detected) {
            rec.d_hat = est.d_hat;
            rec.zeta_hat = est.zeta_hat;
            rec.cfo_hat_hz = est.eps_f_hat / (2.0 * M_PI * ts);
            cfo_resid.push_back(cfo - rec.cfo_hat_hz);
            sto_resid.push_back(rec.true_delay_ts -
                                (static_cast<double>(est.d_hat) + est.zeta_hat));
            ++res.frames_detected;
        } else {
            ++res.frames_missed;
        }
        res.frames.push_back(rec);
        theta = wrap_phase(theta + p.eps_f(ts) * static_cast<double>(n_cyc));
    }

    if (res.frames_detected == 0)
        throw std::runtime_error("campaign: no frames detected; check SNR and detector settings");
    res.cfo_residual_hz = compute_error_stats(cfo_resid, cfo_tails_hz, cfo_bin_hz);
    res.sto_residual_ts = compute_error_stats(sto_resid, sto_tails_ts, sto_bin_ts);
    return res;
}

report_format format_from_name(const std::string& name) {
    if (name == "text") return report_format::text;
    if (name == "csv") return report_format::csv;
    throw std::invalid_argument("unknown report format: " + name + " (expected text or csv)");
}

namespace {

void emit_stats_csv(std::ostringstream& o, const std::string& prefix, const std::string& unit,
                    const error_stats& st) {
    o << prefix << "_mean_" << unit << "," << fmt17(st.mean) << "\n";
    o << prefix << "_std_" << unit << "," << fmt17(st.std_dev) << "\n";
    o << prefix << "_n_samples," << st.n_samples << "\n";
    o << prefix << "_bin_width_" << unit << "," << fmt17(st.bin_width) << "\n";
    for (size_t i = 0; i < st.tail_probs.size(); ++i) {
        o << prefix << "_tail_" << i << "_threshold_" << unit << ","
          << fmt17(st.tail_probs[i].first) << "\n";
        o << prefix << "_tail_" << i << "_prob," << fmt17(st.tail_probs[i].second) << "\n";
    }
}

void emit_stats_text(std::ostringstream& o, const std::string& title, const std::string& unit,
                     const error_stats& st) {
    o << title << "\n";
    o << "  Mean                 " << std::setw(14) << st.mean << "\n";
    o << "  Std. Dev.            " << std::setw(14) << st.std_dev << "\n";
    for (const auto& [thr, prob] : st.tail_probs) {
        std::ostringstream label;
        label << "  Tail prob. at " << thr << " " << unit;
        o << label.str();
        for (size_t sp = label.str().size(); sp < 23; ++sp) o << ' ';
        o << std::setw(12) << prob << "\n";
    }
    o << "  samples " << st.n_samples << ", histogram bins of width " << st.bin_width << " " << unit
      << ": " << st.histogram.size() << " populated\n";
}

} // namespace

std::string emit_report(const campaign_result& res, report_format fmt) {
    std::ostringstream o;
    if (fmt == report_format::csv) {
        o << "metric,value\n";
        o << "frames_total," << res.frames_total << "\n";
        o << "frames_detected," << res.frames_detected << "\n";
        o << "frames_missed," << res.frames_missed << "\n";
        emit_stats_csv(o, "cfo", "hz", res.cfo_residual_hz);
        emit_stats_csv(o, "sto", "ts", res.sto_residual_ts);
        return o.str();
    }
    o << std::fixed << std::setprecision(6);
    o << "campaign: " << res.frames_total << " frames, " << res.frames_detected << " detected, "
      << res.frames_missed << " missed\n\n";
    emit_stats_text(o, "CFO residual (Hz)", "Hz", res.cfo_residual_hz);
    o << "\n";
    emit_stats_text(o, "STO residual (Ts)", "Ts", res.sto_residual_ts);
    o << "\nStd. Dev. is the population form (normalized by the sample count).\n";
    return o.str();
}

std::string histogram_to_csv(const error_stats& stats) {
    std::ostringstream o;
    o << "bin_center,count\n";
    for (const auto& [center, count] : stats.histogram)
        o << fmt17(center) << "," << count << "\n";
    return o.str();
}

campaign_result parse_report_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || line != "metric,value")
        throw std::invalid_argument("report csv: missing metric,value header");
    std::map<std::string, std::string> kv;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        size_t c = line.find(',');
        if (c == std::string::npos)
            throw std::invalid_argument("report csv: malformed row: " + line);
        kv[line.substr(0, c)] = line.substr(c + 1);
    }
    auto want = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("report csv: missing metric " + key);
        return it->second;
    };
    auto wantd = [&](const std::string& key) { return std::stod(want(key)); };
    auto wantll = [&](const std::string& key) { return std::stoll(want(key)); };

    campaign_result res;
    res.frames_total = wantll("frames_total");
    res.frames_detected = wantll("frames_detected");
    res.frames_missed = wantll("frames_missed");
    auto parse_stats = [&](const std::string& prefix, const std::string& unit) {
        error_stats st;
        st.mean = wantd(prefix + "_mean_" + unit);
        st.std_dev = wantd(prefix + "_std_" + unit);
        st.n_samples = wantll(prefix + "_n_samples");
        st.bin_width = wantd(prefix + "_bin_width_" + unit);
        for (size_t i = 0;; ++i) {
            std::string tkey = prefix + "_tail_" + std::to_string(i) + "_threshold_" + unit;
            if (kv.find(tkey) == kv.end()) break;
            st.tail_probs.emplace_back(wantd(tkey),
                                       wantd(prefix + "_tail_" + std::to_string(i) + "_prob"));
        }
        return st;
    };
    res.cfo_residual_hz = parse_stats("cfo", "hz");
    res.sto_residual_ts = parse_stats("sto", "ts");
    return res;
}

} // namespace distsync
