#include "uwa/demod.hpp"

#include <cmath>
#include <numbers>

#include "uwa/fft.hpp"

namespace uwa {

static void check_block(const ComplexBlock& v, const OfdmConfig& cfg) {
    if (static_cast<int>(v.samples.size()) != cfg.samples_per_block())
        throw std::runtime_error("demod: block length does not match samples_per_block");
}

std::vector<std::pair<int, int>> partition_windows(int samples_total, int intervals) {
    if (intervals < 1 || intervals > samples_total)
        throw std::invalid_argument("partition_windows: intervals must be in [1, samples]");
    std::vector<std::pair<int, int>> out;
    out.reserve(intervals);
    const int base = samples_total / intervals;
    const int rem = samples_total % intervals;
    int off = 0;
    for (int a = 0; a < intervals; ++a) {
        const int len = base + (a < rem ? 1 : 0);
        out.emplace_back(off, len);
        off += len;
    }
    return out;
}

std::vector<double> frequency_grid(int k, double delta_f, int half_grid, double fe_hz) {
    if (half_grid < 0) throw std::invalid_argument("frequency_grid: half_grid must be >= 0");
    if (half_grid > 0 && fe_hz <= 0.0)
        throw std::invalid_argument("frequency_grid: fe_hz must be positive when half_grid > 0");
    std::vector<double> out;
    out.reserve(2 * half_grid + 1);
    for (int l = -half_grid; l <= half_grid; ++l)
        out.push_back(k * delta_f + (static_cast<double>(l) / (half_grid + 1)) * fe_hz);
    return out;
}

std::vector<cplx> single_fft_demod(const ComplexBlock& v, const OfdmConfig& cfg) {
    check_block(v, cfg);
    const int NS = cfg.samples_per_block();
    const int K = cfg.carrier_count;
    std::vector<cplx> x(K);
    if (is_pow2(static_cast<std::size_t>(NS))) {
        std::vector<cplx> buf = v.samples;
        Fft plan(NS);
        plan.forward(buf.data());
        for (int k = 0; k < K; ++k) x[k] = buf[k] / static_cast<double>(NS);
    } else {
        for (int k = 0; k < K; ++k) {
            cplx acc{0.0, 0.0};
            for (int n = 0; n < NS; ++n) {
                const double ph = -2.0 * std::numbers::pi * k * n / static_cast<double>(NS);
                acc += v.samples[n] * cplx{std::cos(ph), std::sin(ph)};
            }
            x[k] = acc / static_cast<double>(NS);
        }
    }
    return x;
}

DemodBankOutput psfft_demod(const ComplexBlock& v, const OfdmConfig& cfg, const DemodConfig& dc) {
    check_block(v, cfg);
    dc.validate();
    const int NS = cfg.samples_per_block();
    const int K = cfg.carrier_count;
    const int A = dc.intervals;
    const int L = dc.half_grid;
    if (!is_pow2(static_cast<std::size_t>(NS))) return psfft_demod_reference(v, cfg, dc);

    const auto windows = partition_windows(NS, A);
    DemodBankOutput out;
    out.carriers = K;
    out.intervals = A;
    out.half_grid = L;
    out.data.assign(static_cast<std::size_t>(K) * out.dimension(), cplx{0.0, 0.0});

    const Fft plan(NS);
    const double fs = cfg.sampling_rate_hz;
    const int cols = A * (2 * L + 1);

    // Each (a, l) column owns a disjoint slice of the output, so the loop is
    // safe to run in parallel and the result does not depend on scheduling.
#pragma omp parallel for schedule(static)
    for (int col = 0; col < cols; ++col) {
        const int a = col / (2 * L + 1);
        const int li = col % (2 * L + 1);
        const int l = li - L;
        const auto [off, len] = windows[a];
        std::vector<cplx> buf(NS, cplx{0.0, 0.0});
        const double fshift = (static_cast<double>(l) / (L + 1)) * dc.fe_hz;
        for (int n = off; n < off + len; ++n) {
            // Absolute block time keeps the inter-interval phase relationship.
            const double ph = -2.0 * std::numbers::pi * fshift * n / fs;
            buf[n] = v.samples[n] * cplx{std::cos(ph), std::sin(ph)};
        }
        plan.forward(buf.data());
        for (int k = 0; k < K; ++k)
            out.at(k, a, l) = buf[k] / static_cast<double>(NS);
    }
    return out;
}

DemodBankOutput psfft_demod_reference(const ComplexBlock& v, const OfdmConfig& cfg,
                                      const DemodConfig& dc) {
    check_block(v, cfg);
    dc.validate();
    const int NS = cfg.samples_per_block();
    const int K = cfg.carrier_count;
    const int A = dc.intervals;
    const int L = dc.half_grid;
    const auto windows = partition_windows(NS, A);
    const double fs = cfg.sampling_rate_hz;

    DemodBankOutput out;
    out.carriers = K;
    out.intervals = A;
    out.half_grid = L;
    out.data.assign(static_cast<std::size_t>(K) * out.dimension(), cplx{0.0, 0.0});

    for (int k = 0; k < K; ++k) {
        const auto grid = frequency_grid(k, cfg.delta_f(), L, dc.fe_hz);
        for (int a = 0; a < A; ++a) {
            const auto [off, len] = windows[a];
            for (int l = -L; l <= L; ++l) {
                const double f = grid[l + L];
                cplx acc{0.0, 0.0};
                for (int n = off; n < off + len; ++n) {
                    const double ph = -2.0 * std::numbers::pi * f * n / fs;
                    acc += v.samples[n] * cplx{std::cos(ph), std::sin(ph)};
                }
                out.at(k, a, l) = acc / static_cast<double>(NS);
            }
        }
    }
    return out;
}

cplx combine(const std::vector<cplx>& w, const cplx* z, int dim) {
    if (static_cast<int>(w.size()) != dim)
        throw std::invalid_argument("combine: weight/output dimension mismatch");
    cplx acc{0.0, 0.0};
    for (int i = 0; i < dim; ++i) acc += std::conj(w[i]) * z[i];
    return acc;
}

cplx combine(const std::vector<cplx>& w, const std::vector<cplx>& z) {
    if (w.size() != z.size()) throw std::invalid_argument("combine: weight/output dimension mismatch");
    return combine(w, z.data(), static_cast<int>(z.size()));
}

}  // namespace uwa
