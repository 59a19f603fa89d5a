#include "uwa/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "uwa/fft.hpp"

namespace uwa {

void validate_taps(const std::vector<PathTap>& taps, double guard_s) {
    if (taps.empty()) throw std::invalid_argument("channel: at least one tap required");
    double prev = -1.0;
    for (const PathTap& t : taps) {
        if (t.delay_s < 0.0) throw std::invalid_argument("channel: negative tap delay");
        if (t.delay_s <= prev) throw std::invalid_argument("channel: tap delays must be strictly increasing");
        if (t.delay_s >= guard_s) throw std::invalid_argument("channel: tap delay exceeds the guard interval");
        prev = t.delay_s;
    }
}

ComplexBlock apply_multipath(const ComplexBlock& x, const std::vector<PathTap>& taps,
                             double guard_s) {
    x.validate();
    validate_taps(taps, guard_s);
    const double fs = x.rate;
    long long dmax = 0;
    for (const PathTap& t : taps) dmax = std::max(dmax, std::llround(t.delay_s * fs));

    ComplexBlock y;
    y.rate = x.rate;
    y.epoch = x.epoch;
    y.samples.assign(x.samples.size() + static_cast<std::size_t>(dmax), cplx{0.0, 0.0});
    for (const PathTap& t : taps) {
        const long long di = std::llround(t.delay_s * fs);
        for (std::size_t n = 0; n < x.samples.size(); ++n) y.samples[n + di] += t.gain * x.samples[n];
    }
    return y;
}

// ---- band-limited resampler -------------------------------------------------

namespace {

constexpr int kHalfWidth = 32;   // taps per side
constexpr int kPhases = 1024;    // tabulated fractional offsets

double bessel_i0(double x) {
    // Series form; converges quickly for the argument range of the window.
    double sum = 1.0, term = 1.0;
    const double q = x * x / 4.0;
    for (int m = 1; m < 64; ++m) {
        term *= q / (m * static_cast<double>(m));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double sinc(double x) {
    const double px = std::numbers::pi * x;
    if (std::abs(px) < 1e-8) return 1.0 - px * px / 6.0;
    return std::sin(px) / px;
}

// kernel[p][t] = windowed sinc at offset (t - HW + 1) - p/P. Rows p and p+1
// bracket a fractional sample position; callers interpolate between them.
const std::vector<std::array<double, 2 * kHalfWidth>>& kernel_table() {
    static const auto table = [] {
        constexpr double beta = 10.0;
        const double norm = bessel_i0(beta);
        std::vector<std::array<double, 2 * kHalfWidth>> tab(kPhases + 1);
        for (int p = 0; p <= kPhases; ++p) {
            const double frac = static_cast<double>(p) / kPhases;
            for (int t = 0; t < 2 * kHalfWidth; ++t) {
                const double x = (t - kHalfWidth + 1) - frac;
                const double u = x / kHalfWidth;
                const double w =
                    (u * u <= 1.0) ? bessel_i0(beta * std::sqrt(1.0 - u * u)) / norm : 0.0;
                tab[p][t] = sinc(x) * w;
            }
        }
        return tab;
    }();
    return table;
}

}  // namespace

ComplexBlock apply_doppler(const ComplexBlock& x, double alpha) {
    x.validate();
    if (std::abs(alpha) > kMaxDopplerFactor)
        throw std::invalid_argument("apply_doppler: |alpha| exceeds the sanity bound");
    if (alpha == 0.0) return x;

    const auto& tab = kernel_table();
    const std::size_t len = x.samples.size();
    const auto out_len = static_cast<std::size_t>(std::floor(len / (1.0 + alpha)));

    // Zero-pad so the kernel can run off both ends of the input.
    std::vector<cplx> pad(len + 3 * kHalfWidth, cplx{0.0, 0.0});
    std::copy(x.samples.begin(), x.samples.end(), pad.begin() + kHalfWidth);

    ComplexBlock y;
    y.rate = x.rate;
    y.epoch = x.epoch;
    y.samples.resize(out_len);
    for (std::size_t n = 0; n < out_len; ++n) {
        const double pos = n * (1.0 + alpha);
        const auto i0 = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(i0);
        const double pf = frac * kPhases;
        const auto pi = static_cast<int>(std::floor(pf));
        const double pfrac = pf - pi;
        cplx acc{0.0, 0.0};
        for (int t = 0; t < 2 * kHalfWidth; ++t) {
            const double k = tab[pi][t] * (1.0 - pfrac) + tab[pi + 1][t] * pfrac;
            acc += k * pad[i0 + t + 1];  // offset j = t - HW + 1 plus HW of padding
        }
        y.samples[n] = acc;
    }
    return y;
}

ComplexBlock apply_doppler_per_block(const ComplexBlock& frame, double alpha,
                                     const OfdmConfig& cfg) {
    if (alpha == 0.0) return frame;
    const auto S = static_cast<std::size_t>(cfg.samples_per_slot());
    const int N = cfg.blocks_per_frame;

    ComplexBlock y;
    y.rate = frame.rate;
    y.epoch = frame.epoch;
    y.samples.assign(std::max(frame.samples.size(), S * N), cplx{0.0, 0.0});

    ComplexBlock seg;
    seg.rate = frame.rate;
    for (int m = 0; m < N; ++m) {
        seg.samples.assign(S, cplx{0.0, 0.0});
        const std::size_t off = m * S;
        for (std::size_t i = 0; i < S && off + i < frame.samples.size(); ++i)
            seg.samples[i] = frame.samples[off + i];
        const ComplexBlock r = apply_doppler(seg, alpha);
        const std::size_t n = std::min(r.samples.size(), S);
        std::copy(r.samples.begin(), r.samples.begin() + n, y.samples.begin() + off);
    }
    return y;
}

ComplexBlock add_awgn(const ComplexBlock& x, double snr_db, double bandwidth_hz,
                      std::uint64_t seed) {
    x.validate();
    if (std::isinf(snr_db) && snr_db > 0.0) return x;

    double power = 0.0;
    for (const cplx& v : x.samples) power += std::norm(v);
    power /= static_cast<double>(x.samples.size());
    if (power <= 0.0) throw std::invalid_argument("add_awgn: zero-power input, SNR undefined");

    // Real noise of total power sigma^2 spreads over [0, fs/2]; the slice
    // falling inside the signal band is sigma^2 * 2B/fs.
    const double sigma2 = power * (x.rate / (2.0 * bandwidth_hz)) * std::pow(10.0, -snr_db / 10.0);
    const double sigma = std::sqrt(sigma2);

    ComplexBlock y = x;
    std::mt19937_64 rng(seed);
    // Box-Muller on explicit uniforms keeps the stream identical across
    // standard libraries.
    double spare = 0.0;
    bool have_spare = false;
    for (cplx& v : y.samples) {
        double z;
        if (have_spare) {
            z = spare;
            have_spare = false;
        } else {
            const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
            const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const double r = std::sqrt(-2.0 * std::log(u1));
            z = r * std::cos(2.0 * std::numbers::pi * u2);
            spare = r * std::sin(2.0 * std::numbers::pi * u2);
            have_spare = true;
        }
        v += cplx{sigma * z, 0.0};
    }
    return y;
}

std::vector<ComplexBlock> to_baseband(const ComplexBlock& r, const OfdmConfig& cfg) {
    r.validate();
    const int NS = cfg.samples_per_block();
    const int G = cfg.guard_samples();
    const long long S = NS + G;
    const int N = cfg.blocks_per_frame;
    const double fs = cfg.sampling_rate_hz;
    const double f0 = cfg.lowest_carrier();

    const std::size_t need = static_cast<std::size_t>(N - 1) * S + NS;
    if (r.samples.size() < need) throw std::runtime_error("to_baseband: not enough samples for the frame");
    const std::size_t padded = static_cast<std::size_t>(N) * S + G;

    // Global-time downshift; the transmitter phases blocks the same way, so
    // per-block carrier phases cancel exactly.
    std::vector<cplx> v(padded, cplx{0.0, 0.0});
    const double base = -2.0 * std::numbers::pi * f0 / fs;
    for (std::size_t n = 0; n < std::min(r.samples.size(), padded); ++n) {
        const double ph = base * static_cast<double>(n);
        v[n] = r.samples[n] * cplx{std::cos(ph), std::sin(ph)};
    }

    // Zero-phase spectral gate per block: gain 2 restores the analytic-signal
    // amplitude halved by Re{}, the raised cosine rolls off across 0.1 B, and
    // everything beyond is removed (including the -2 f_0 image, which lands
    // on exact bins because f_0 is a multiple of delta_f).
    const double pb = 1.05 * cfg.bandwidth_hz;
    const double tw = 0.1 * cfg.bandwidth_hz;
    std::vector<double> gain(NS);
    for (int j = 0; j < NS; ++j) {
        const double f = (j <= NS / 2) ? fs * j / NS : fs * (j - NS) / NS;
        const double af = std::abs(f);
        if (af <= pb)
            gain[j] = 2.0;
        else if (af <= pb + tw)
            gain[j] = 1.0 + std::cos(std::numbers::pi * (af - pb) / tw);
        else
            gain[j] = 0.0;
    }

    Fft plan(NS);
    std::vector<ComplexBlock> blocks;
    blocks.reserve(N);
    std::vector<cplx> w(NS);
    for (int m = 0; m < N; ++m) {
        const std::size_t off = static_cast<std::size_t>(m) * S;
        std::copy(v.begin() + off, v.begin() + off + NS, w.begin());
        // Overlap-add the guard tail modulo the block length: restores the
        // circular convolution the per-block gate assumes.
        for (int i = 0; i < G; ++i) w[i % NS] += v[off + NS + i];
        plan.forward(w.data());
        for (int j = 0; j < NS; ++j) w[j] *= gain[j];
        plan.inverse(w.data());

        ComplexBlock blk;
        blk.rate = fs;
        blk.epoch = static_cast<double>(off) / fs;
        blk.samples = w;
        blocks.push_back(std::move(blk));
    }
    return blocks;
}

ChannelRealization channel_profile_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ChannelRealization ch;
    if (j.contains("taps")) {
        ch.taps.clear();
        for (const auto& t : j.at("taps")) {
            PathTap tap;
            tap.delay_s = t.at(0).get<double>() * 1e-3;
            if (t.at(1).is_array())
                tap.gain = cplx{t.at(1).at(0).get<double>(), t.at(1).at(1).get<double>()};
            else
                tap.gain = cplx{t.at(1).get<double>(), 0.0};
            ch.taps.push_back(tap);
        }
    }
    if (j.contains("doppler_factor")) ch.doppler_factor = j.at("doppler_factor").get<double>();
    if (j.contains("snr_db") && !j.at("snr_db").is_null()) ch.snr_db = j.at("snr_db").get<double>();
    if (std::abs(ch.doppler_factor) > kMaxDopplerFactor)
        throw std::invalid_argument("channel profile: |doppler_factor| exceeds the sanity bound");
    return ch;
}

ChannelRealization load_channel_profile(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("channel profile: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return channel_profile_from_json_text(ss.str());
}

}  // namespace uwa
