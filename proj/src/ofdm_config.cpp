#include "uwa/ofdm_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace uwa {

int OfdmConfig::oversampling() const {
    const double ratio = sampling_rate_hz / bandwidth_hz;
    const int os = static_cast<int>(std::llround(ratio));
    if (os < 1 || sampling_rate_hz != os * bandwidth_hz)
        throw std::invalid_argument("OfdmConfig: sampling rate must be an integer multiple of the bandwidth");
    return os;
}

int OfdmConfig::guard_samples() const {
    return static_cast<int>(std::llround(guard_s * sampling_rate_hz));
}

double OfdmConfig::lowest_carrier() const {
    if (lowest_carrier_hz > 0.0) return lowest_carrier_hz;
    const double df = delta_f();
    const double centred = center_freq_hz - bandwidth_hz / 2.0 + df / 2.0;
    return std::round(centred / df) * df;
}

void OfdmConfig::validate() const {
    if (carrier_count < 2) throw std::invalid_argument("OfdmConfig: carrier count must be >= 2");
    if (bandwidth_hz <= 0.0) throw std::invalid_argument("OfdmConfig: bandwidth must be positive");
    if (sampling_rate_hz <= 0.0) throw std::invalid_argument("OfdmConfig: sampling rate must be positive");
    if (guard_s < 0.0) throw std::invalid_argument("OfdmConfig: guard duration must be non-negative");
    if (blocks_per_frame < 1) throw std::invalid_argument("OfdmConfig: blocks per frame must be >= 1");
    oversampling();  // integer-multiple invariant
    const double f0 = lowest_carrier();
    if (f0 <= 0.0) throw std::invalid_argument("OfdmConfig: lowest carrier must be positive");
    if (f0 + bandwidth_hz > sampling_rate_hz / 2.0)
        throw std::invalid_argument("OfdmConfig: band exceeds the Nyquist frequency");
}

OfdmConfig OfdmConfig::from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    OfdmConfig cfg;
    if (j.contains("carriers")) cfg.carrier_count = j.at("carriers").get<int>();
    if (j.contains("bandwidth_hz")) cfg.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    if (j.contains("center_freq_hz")) cfg.center_freq_hz = j.at("center_freq_hz").get<double>();
    if (j.contains("sampling_rate_hz")) cfg.sampling_rate_hz = j.at("sampling_rate_hz").get<double>();
    if (j.contains("guard_ms")) cfg.guard_s = j.at("guard_ms").get<double>() * 1e-3;
    if (j.contains("blocks_per_frame")) cfg.blocks_per_frame = j.at("blocks_per_frame").get<int>();
    if (j.contains("lowest_carrier_hz")) cfg.lowest_carrier_hz = j.at("lowest_carrier_hz").get<double>();
    cfg.validate();
    return cfg;
}

OfdmConfig OfdmConfig::from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("OfdmConfig: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_json_text(ss.str());
}

std::string OfdmConfig::to_json_text() const {
    nlohmann::json j;
    j["carriers"] = carrier_count;
    j["bandwidth_hz"] = bandwidth_hz;
    j["center_freq_hz"] = center_freq_hz;
    j["sampling_rate_hz"] = sampling_rate_hz;
    j["guard_ms"] = guard_s * 1e3;
    j["blocks_per_frame"] = blocks_per_frame;
    j["lowest_carrier_hz"] = lowest_carrier();
    return j.dump(2);
}

}  // namespace uwa
