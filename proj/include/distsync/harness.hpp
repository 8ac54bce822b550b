#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "distsync/config.hpp"

namespace distsync {

// Periodic sync schedule. One preamble is sent at the head of every frame;
// t_frame >= t_sync + t_guard so estimation finishes before payload.
struct frame_schedule {
    double t_sync_s = 0.0;
    double t_guard_s = 4e-3;
    double t_frame_s = 100e-3;
    int n_frames = 650;

    long long n_cyc(double ts) const; // samples per frame period
};

frame_schedule make_schedule(const config& cfg);

// Residual-error summary over detected frames. std_dev is the population form
// (divide by n, not n-1). Histogram bins are centered on integer multiples of
// bin_width: bin j covers ((j-1/2)w, (j+1/2)w].
struct error_stats {
    double mean = 0.0;
    double std_dev = 0.0;
    std::vector<std::pair<double, double>> tail_probs; // (threshold, P(|x| > threshold))
    long long n_samples = 0;
    double bin_width = 0.0;
    std::vector<std::pair<double, long long>> histogram; // (bin center, count), ascending
};

error_stats compute_error_stats(const std::vector<double>& samples,
                                const std::vector<double>& tail_thresholds, double bin_width);

// per-frame ground truth vs estimate, kept for residual accounting
struct frame_record {
    int frame_index = 0;
    bool detected = false;
    double true_cfo_hz = 0.0;
    double true_delay_ts = 0.0; // lead + channel delay, units ts
    int d_hat = 0;
    double zeta_hat = 0.0;
    double cfo_hat_hz = 0.0;
};

struct campaign_result {
    error_stats cfo_residual_hz; // tails at 5/10/15 Hz, bins 2.5 Hz
    error_stats sto_residual_ts; // tails at 1/16..2 Ts, bins Ts/8
    long long frames_total = 0;
    long long frames_detected = 0;
    long long frames_missed = 0;
    std::vector<frame_record> frames;
};

// Simulates n_frames preamble windows with phase-continuous CFO across frames
// (theta_{k+1} = theta_k + eps_k * n_cyc) and optional oscillator drift, runs
// the full receiver chain on each (EKF state threads across frames when
// enabled), and aggregates residuals over the detected frames. Missed frames
// are counted, not scored; zero detections is an error.
campaign_result run_trial_campaign(const config& cfg, uint64_t seed);

enum class report_format { text, csv };
report_format format_from_name(const std::string& name);

// csv: metric,value rows (17 significant digits, lossless for doubles);
// text: human tables with Mean / Std. Dev. / Tail prob. rows per metric
std::string emit_report(const campaign_result& res, report_format fmt);

// bin_center,count rows for one residual histogram
std::string histogram_to_csv(const error_stats& stats);

// inverse of the csv emitter: reconstructs stats (histograms and per-frame
// records excluded) so emit(parse(emit(x))) == emit(x)
campaign_result parse_report_csv(const std::string& text);

} // namespace distsync
