#pragma once

namespace distsync {

struct crlb_inputs {
    double t_est;    // observation duration, s (m_rep * n_zc * ts)
    double snr_sync; // linear
    double ts;       // sample duration, s
};

// closed-form lower-bound evaluators used as reporting baselines

// CFO bound, Hz^2: 3 / (2 pi^2 t_est^2 snr)
double crlb_cfo_variance(const crlb_inputs& in);

// timing bound, s^2: 12 pi ts^3 / (t_est snr)
double crlb_sto_variance(const crlb_inputs& in);

} // namespace distsync
