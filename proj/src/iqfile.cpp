#include "distsync/iqfile.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace distsync {

namespace {

static_assert(sizeof(float) == 4, "raw IQ format assumes 4-byte floats");

uint32_t to_le(float v) {
    uint32_t u;
    std::memcpy(&u, &v, 4);
    if constexpr (std::endian::native == std::endian::big)
        u = __builtin_bswap32(u);
    return u;
}

float from_le(uint32_t u) {
    if constexpr (std::endian::native == std::endian::big)
        u = __builtin_bswap32(u);
    float v;
    std::memcpy(&v, &u, 4);
    return v;
}

} // namespace

void write_iq(const std::string& path, const complex_signal& sig, const std::string& description) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& x : sig.samples) {
        uint32_t words[2] = {to_le(static_cast<float>(x.real())),
                             to_le(static_cast<float>(x.imag()))};
        f.write(reinterpret_cast<const char*>(words), 8);
    }
    if (!f) throw std::runtime_error("write failed: " + path);

    std::ofstream meta(path + ".meta");
    if (!meta) throw std::runtime_error("cannot open for writing: " + path + ".meta");
    meta << "sample_rate_hz=" << 1.0 / sig.sample_duration << "\n";
    meta << "description=" << description << "\n";
    if (!meta) throw std::runtime_error("write failed: " + path + ".meta");
}

complex_signal read_iq(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    f.seekg(0, std::ios::end);
    auto bytes = static_cast<long long>(f.tellg());
    f.seekg(0);
    if (bytes % 8 != 0)
        throw std::runtime_error("truncated IQ file (size not a multiple of 8): " + path);

    complex_signal sig;
    sig.samples.reserve(static_cast<size_t>(bytes / 8));
    uint32_t words[2];
    while (f.read(reinterpret_cast<char*>(words), 8))
        sig.samples.emplace_back(from_le(words[0]), from_le(words[1]));

    // sidecar is optional on read; fall back to 1 MHz if absent or silent
    std::ifstream meta(path + ".meta");
    std::string line;
    while (meta && std::getline(meta, line)) {
        const std::string key = "sample_rate_hz=";
        if (line.rfind(key, 0) == 0) {
            double rate = std::stod(line.substr(key.size()));
            if (rate > 0.0) sig.sample_duration = 1.0 / rate;
        }
    }
    return sig;
}

} // namespace distsync
