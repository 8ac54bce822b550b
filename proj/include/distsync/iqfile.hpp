#pragma once
#include <string>

#include "distsync/signal.hpp"

namespace distsync {

// Raw IQ files: interleaved 32-bit little-endian floats (re, im, ...), no
// header. Sample rate and a free-form description travel in a key=value
// sidecar at <path>.meta so external SDR tools can read the payload directly.
void write_iq(const std::string& path, const complex_signal& sig,
              const std::string& description = "");

complex_signal read_iq(const std::string& path);

} // namespace distsync
