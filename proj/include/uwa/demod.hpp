#pragma once

#include <utility>

#include "uwa/ofdm_config.hpp"
#include "uwa/types.hpp"

namespace uwa {

// Demodulator-bank geometry: A non-overlapping time windows per block and a
// frequency grid of 2L+1 points per carrier spaced by f_e/(L+1).
struct DemodConfig {
    int intervals = 1;   // A
    int half_grid = 0;   // L
    double fe_hz = 0.0;  // f_e

    int dimension() const { return intervals * (2 * half_grid + 1); }
    void validate() const {
        if (intervals < 1) throw std::invalid_argument("DemodConfig: intervals must be >= 1");
        if (half_grid < 0) throw std::invalid_argument("DemodConfig: half_grid must be >= 0");
        if (half_grid > 0 && fe_hz <= 0.0)
            throw std::invalid_argument("DemodConfig: fe_hz must be positive when half_grid > 0");
    }
};

// z[k][a][l] for k = 0..K-1, a = 0..A-1, l = -L..L, stored so that the
// stacked per-carrier vector (interval-major, l ascending within each
// interval) is the contiguous slice at carrier k.
struct DemodBankOutput {
    int carriers = 0;
    int intervals = 1;
    int half_grid = 0;
    std::vector<cplx> data;

    int dimension() const { return intervals * (2 * half_grid + 1); }
    cplx& at(int k, int a, int l) {
        return data[static_cast<std::size_t>(k) * dimension() + a * (2 * half_grid + 1) +
                    (l + half_grid)];
    }
    const cplx& at(int k, int a, int l) const {
        return const_cast<DemodBankOutput*>(this)->at(k, a, l);
    }
    const cplx* stacked(int k) const { return data.data() + static_cast<std::size_t>(k) * dimension(); }
};

// x_k = (1/T) sum_n v(n) exp(-i 2 pi k delta_f n Ts) Ts; the unit-gain
// convention makes an ideal noise-free chain return x_k = d_k.
std::vector<cplx> single_fft_demod(const ComplexBlock& v, const OfdmConfig& cfg);

// Contiguous sub-blocks as (offset, length) pairs covering samples_total;
// remainder samples go to the earliest intervals.
std::vector<std::pair<int, int>> partition_windows(int samples_total, int intervals);

// k delta_f + (l/(L+1)) f_e for l = -L..L, ascending.
std::vector<double> frequency_grid(int k, double delta_f, int half_grid, double fe_hz);

// Full bank. The parallel kernel shifts each (a, l) column by the grid
// offset and runs a standard FFT (exact, since the residual frequencies are
// whole bins); the reference implementation evaluates every z_{k,a,l} as a
// direct complex-exponential inner product and is kept for testing.
DemodBankOutput psfft_demod(const ComplexBlock& v, const OfdmConfig& cfg, const DemodConfig& dc);
DemodBankOutput psfft_demod_reference(const ComplexBlock& v, const OfdmConfig& cfg,
                                      const DemodConfig& dc);

// Hermitian inner product w^H z over the stacked dimension.
cplx combine(const std::vector<cplx>& w, const cplx* z, int dim);
cplx combine(const std::vector<cplx>& w, const std::vector<cplx>& z);

}  // namespace uwa
