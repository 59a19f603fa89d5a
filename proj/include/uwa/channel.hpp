#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "uwa/ofdm_config.hpp"
#include "uwa/types.hpp"

namespace uwa {

struct PathTap {
    double delay_s = 0.0;
    cplx gain{1.0, 0.0};
};

// One channel draw: static taps plus a residual Doppler scaling and the
// receiver input SNR. Taps stay fixed for a whole frame; the only time
// variation in the chain is the Doppler scaling.
struct ChannelRealization {
    std::vector<PathTap> taps;
    double doppler_factor = 0.0;  // alpha
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t noise_seed = 0;
};

// At least one tap, delays non-negative and strictly increasing, all delays
// below the guard duration. Throws std::invalid_argument.
void validate_taps(const std::vector<PathTap>& taps, double guard_s);

// Sanity bound on the Doppler factor (far above any residual of interest).
inline constexpr double kMaxDopplerFactor = 1e-2;

// y(n) = sum_p h_p x(n - round(tau_p fs)); length grows by the largest delay.
ComplexBlock apply_multipath(const ComplexBlock& x, const std::vector<PathTap>& taps,
                             double guard_s);

// Uniform passband time scaling t -> (1+alpha) t via a Kaiser-windowed sinc
// interpolator: y(n) = x~(n (1+alpha)), output length floor(len/(1+alpha)).
ComplexBlock apply_doppler(const ComplexBlock& x, double alpha);

// Chain variant: scales each block+guard segment about its own origin,
// modelling ideal per-block resynchronization so the demodulation window
// never drifts by more than one block's worth of compression.
ComplexBlock apply_doppler_per_block(const ComplexBlock& frame, double alpha,
                                     const OfdmConfig& cfg);

// Adds real white Gaussian noise calibrated so the in-band SNR (signal power
// over the noise power falling inside bandwidth_hz) equals snr_db. Signal
// power is measured over the whole input, guard silence included. An
// infinite snr_db disables noise; an all-zero input is an error.
ComplexBlock add_awgn(const ComplexBlock& x, double snr_db, double bandwidth_hz,
                      std::uint64_t seed);

// Downshifts by f_0 over global frame time, folds each guard tail back onto
// its block (making the tap delays circular per block), applies a zero-phase
// low-pass gate (transition band 0.1 B, stopband fully suppressed), and
// returns the N guard-free baseband blocks.
std::vector<ComplexBlock> to_baseband(const ComplexBlock& r, const OfdmConfig& cfg);

// Profile file: {"taps": [[delay_ms, gain], ...], "doppler_factor": a,
// "snr_db": s}. A gain is a real number or an [re, im] pair; a missing or
// null snr_db means noise off.
ChannelRealization load_channel_profile(const std::string& path);
ChannelRealization channel_profile_from_json_text(const std::string& text);

}  // namespace uwa
