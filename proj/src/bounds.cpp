#include "distsync/bounds.hpp"

#include <cmath>

#include "distsync/signal.hpp"

namespace distsync {

namespace {
void check(const crlb_inputs& in) {
    require(in.t_est > 0.0 && in.snr_sync > 0.0 && in.ts > 0.0,
            "crlb inputs must all be positive");
}
} // namespace

double crlb_cfo_variance(const crlb_inputs& in) {
    check(in);
    return 3.0 / (2.0 * M_PI * M_PI * in.t_est * in.t_est * in.snr_sync);
}

double crlb_sto_variance(const crlb_inputs& in) {
    check(in);
    return 12.0 * M_PI * in.ts * in.ts * in.ts / (in.t_est * in.snr_sync);
}

} // namespace distsync
