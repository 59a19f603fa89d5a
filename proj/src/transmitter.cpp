#include "uwa/transmitter.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "uwa/fft.hpp"

namespace uwa {

static_assert(std::endian::native == std::endian::little, "frame dumps assume a little-endian host");

std::vector<cplx> differential_encode(const std::vector<cplx>& b, cplx a0) {
    std::vector<cplx> d;
    d.reserve(b.size() + 1);
    d.push_back(a0);
    for (const cplx& bk : b) d.push_back(bk * d.back());
    return d;
}

// Unbiased-enough uniform index from the top 32 bits; avoids the
// implementation-defined behaviour of std::uniform_int_distribution.
static int draw_index(std::mt19937_64& rng, int order) {
    const std::uint64_t hi = rng() >> 32;
    return static_cast<int>((hi * static_cast<std::uint64_t>(order)) >> 32);
}

FramePlan make_frame_plan(const OfdmConfig& cfg, const PskConstellation& c, int pilot_count,
                          std::uint64_t seed) {
    cfg.validate();
    if (pilot_count < 0) throw std::invalid_argument("make_frame_plan: negative pilot count");
    const int K = cfg.carrier_count;
    const int N = cfg.blocks_per_frame;

    FramePlan plan;
    plan.blocks_per_frame = N;
    plan.pilot_count = pilot_count;

    std::mt19937_64 rng(seed);
    for (int m = 0; m < N; ++m) {
        std::vector<int> qs(K - 1);
        std::vector<cplx> b(K - 1);
        for (int k = 0; k < K - 1; ++k) {
            qs[k] = draw_index(rng, c.order);
            b[k] = c.symbols[qs[k]];
        }
        plan.data_indices.push_back(std::move(qs));
        plan.encoded.push_back(differential_encode(b, c.symbols[0]));
        plan.data.push_back(std::move(b));
    }

    // First pilot_count (block, carrier) pairs in zigzag traversal order.
    int remaining = pilot_count;
    for (int m = 0; m < N && remaining > 0; ++m) {
        const bool up = (m % 2 == 0);
        for (int i = 0; i < K && remaining > 0; ++i, --remaining)
            plan.pilot_positions.emplace_back(m, up ? i : K - 1 - i);
    }
    return plan;
}

// Analytic (complex) block with an extra carrier phase for a start offset of
// t0 samples: sum_k d_k exp(i 2 pi f_k n Ts) * exp(i 2 pi f_0 t0 Ts).
static std::vector<cplx> synthesize(const std::vector<cplx>& d, const OfdmConfig& cfg,
                                    long long t0_samples) {
    const int NS = cfg.samples_per_block();
    const double f0 = cfg.lowest_carrier();
    const double fs = cfg.sampling_rate_hz;
    std::vector<cplx> a(NS, cplx{0.0, 0.0});

    if (is_pow2(static_cast<std::size_t>(NS))) {
        // sum_k d_k exp(i 2 pi k n / NS) == NS * IFFT(d zero-padded)
        for (std::size_t k = 0; k < d.size(); ++k) a[k] = d[k];
        Fft plan(NS);
        plan.inverse(a.data());
        for (cplx& v : a) v *= static_cast<double>(NS);
    } else {
        for (int n = 0; n < NS; ++n) {
            cplx acc{0.0, 0.0};
            for (std::size_t k = 0; k < d.size(); ++k) {
                const double ph = 2.0 * std::numbers::pi * cfg.delta_f() * k * n / fs;
                acc += d[k] * cplx{std::cos(ph), std::sin(ph)};
            }
            a[n] = acc;
        }
    }

    const double base = 2.0 * std::numbers::pi * f0 / fs;
    const double ph0 = base * static_cast<double>(t0_samples);
    const cplx rot{std::cos(ph0), std::sin(ph0)};
    for (int n = 0; n < NS; ++n) {
        const double ph = base * n;
        a[n] *= cplx{std::cos(ph), std::sin(ph)} * rot;
    }
    return a;
}

static ComplexBlock modulate_at(const std::vector<cplx>& d, const OfdmConfig& cfg,
                                long long t0_samples) {
    if (static_cast<int>(d.size()) != cfg.carrier_count)
        throw std::invalid_argument("modulate_block: symbol count must equal the carrier count");
    const auto a = synthesize(d, cfg, t0_samples);
    ComplexBlock out;
    out.rate = cfg.sampling_rate_hz;
    out.epoch = static_cast<double>(t0_samples) * cfg.sample_interval();
    out.samples.resize(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) out.samples[n] = cplx{a[n].real(), 0.0};
    return out;
}

ComplexBlock modulate_block(const std::vector<cplx>& d, const OfdmConfig& cfg) {
    return modulate_at(d, cfg, 0);
}

ComplexBlock modulate_block_reference(const std::vector<cplx>& d, const OfdmConfig& cfg) {
    if (static_cast<int>(d.size()) != cfg.carrier_count)
        throw std::invalid_argument("modulate_block: symbol count must equal the carrier count");
    const int NS = cfg.samples_per_block();
    const double fs = cfg.sampling_rate_hz;
    ComplexBlock out;
    out.rate = fs;
    out.samples.resize(NS);
    for (int n = 0; n < NS; ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) {
            const double ph = 2.0 * std::numbers::pi * cfg.carrier_freq(static_cast<int>(k)) * n / fs;
            acc += (d[k] * cplx{std::cos(ph), std::sin(ph)}).real();
        }
        out.samples[n] = cplx{acc, 0.0};
    }
    return out;
}

ComplexBlock assemble_frame(const FramePlan& plan, const OfdmConfig& cfg) {
    if (plan.blocks_per_frame != cfg.blocks_per_frame ||
        static_cast<int>(plan.encoded.size()) != cfg.blocks_per_frame)
        throw std::invalid_argument("assemble_frame: plan does not match the configuration");
    const int NS = cfg.samples_per_block();
    const int G = cfg.guard_samples();
    const long long S = NS + G;

    ComplexBlock frame;
    frame.rate = cfg.sampling_rate_hz;
    frame.samples.assign(static_cast<std::size_t>(S) * cfg.blocks_per_frame, cplx{0.0, 0.0});
    for (int m = 0; m < cfg.blocks_per_frame; ++m) {
        const ComplexBlock blk = modulate_at(plan.encoded[m], cfg, m * S);
        std::copy(blk.samples.begin(), blk.samples.end(), frame.samples.begin() + m * S);
    }
    return frame;
}

void dump_frame(const ComplexBlock& frame, const OfdmConfig& cfg, const std::string& path) {
    frame.validate();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("dump_frame: cannot open " + path);
    for (const cplx& v : frame.samples) {
        const double re = v.real(), im = v.imag();
        f.write(reinterpret_cast<const char*>(&re), sizeof re);
        f.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
    f.close();

    nlohmann::json meta;
    meta["format"] = "f64le_interleaved_re_im";
    meta["samples"] = frame.samples.size();
    meta["rate_hz"] = frame.rate;
    meta["epoch_s"] = frame.epoch;
    meta["carriers"] = cfg.carrier_count;
    meta["blocks_per_frame"] = cfg.blocks_per_frame;
    meta["samples_per_block"] = cfg.samples_per_block();
    meta["guard_samples"] = cfg.guard_samples();
    meta["lowest_carrier_hz"] = cfg.lowest_carrier();
    std::ofstream side(path + ".json");
    if (!side) throw std::runtime_error("dump_frame: cannot open " + path + ".json");
    side << meta.dump(2) << "\n";
}

ComplexBlock load_frame_dump(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw std::runtime_error("load_frame_dump: missing sidecar for " + path);
    nlohmann::json meta;
    side >> meta;
    if (meta.at("format").get<std::string>() != "f64le_interleaved_re_im")
        throw std::runtime_error("load_frame_dump: unknown format");

    ComplexBlock out;
    out.rate = meta.at("rate_hz").get<double>();
    out.epoch = meta.at("epoch_s").get<double>();
    const std::size_t n = meta.at("samples").get<std::size_t>();
    out.samples.resize(n);
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_frame_dump: cannot open " + path);
    for (std::size_t i = 0; i < n; ++i) {
        double re = 0.0, im = 0.0;
        f.read(reinterpret_cast<char*>(&re), sizeof re);
        f.read(reinterpret_cast<char*>(&im), sizeof im);
        out.samples[i] = cplx{re, im};
    }
    if (!f) throw std::runtime_error("load_frame_dump: truncated dump");
    return out;
}

}  // namespace uwa
