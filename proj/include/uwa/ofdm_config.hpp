#pragma once

#include <cstdint>
#include <string>

#include "uwa/types.hpp"

namespace uwa {

// OFDM geometry. Fields are set directly (or loaded from JSON) and then
// validate() is called once; after that the object is treated as immutable
// and may be shared freely across workers.
struct OfdmConfig {
    int carrier_count = 1024;        // K
    double bandwidth_hz = 12e3;      // B
    double center_freq_hz = 32e3;    // f_c
    double sampling_rate_hz = 192e3; // f_s
    double guard_s = 16e-3;          // T_g
    int blocks_per_frame = 8;        // N
    // Lowest carrier f_0. 0 means "derive from f_c": band centred on f_c,
    // then snapped to the nearest multiple of delta_f so that per-block
    // processing sees every carrier (and the negative-frequency image of a
    // real passband signal) on an exact DFT bin.
    double lowest_carrier_hz = 0.0;

    double delta_f() const { return bandwidth_hz / carrier_count; }
    double block_duration() const { return 1.0 / delta_f(); }
    double sample_interval() const { return 1.0 / sampling_rate_hz; }
    int oversampling() const;        // f_s / B, validated integer
    int samples_per_block() const { return carrier_count * oversampling(); }
    int guard_samples() const;
    int samples_per_slot() const { return samples_per_block() + guard_samples(); }
    int samples_per_frame() const { return blocks_per_frame * samples_per_slot(); }

    double lowest_carrier() const;   // resolved f_0
    double carrier_freq(int k) const { return lowest_carrier() + k * delta_f(); }

    // Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    // Keys: carriers, bandwidth_hz, center_freq_hz, sampling_rate_hz,
    // guard_ms, blocks_per_frame, optional lowest_carrier_hz. Missing keys
    // keep the defaults above.
    static OfdmConfig from_json_text(const std::string& text);
    static OfdmConfig from_json_file(const std::string& path);
    std::string to_json_text() const;
};

}  // namespace uwa
