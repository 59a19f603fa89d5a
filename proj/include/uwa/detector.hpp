#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "uwa/constellation.hpp"
#include "uwa/demod.hpp"
#include "uwa/types.hpp"

namespace uwa {

// Step size, thresholds and pilot budget for the stochastic-gradient
// combiner. Defaults come from the calibration sweep shipped with the CLI
// (`calibrate` subcommand); the pilot budget matches the reference setup.
struct SgaParams {
    double mu = 0.15;
    double error_threshold = 2.0;     // e_th
    double gradient_threshold = 100.0;  // g_th
    int pilot_count = 250;            // N_p per frame
};

// Carried combiner state. The weight handed across block boundaries
// (w_temp) seeds both the anchor carrier and its first neighbour; the
// traversal direction flips once per block.
struct CombinerState {
    std::vector<cplx> w_temp;
    int flag = +1;
    int pilots_consumed = 0;
    SgaParams params;

    // w_temp starts as 1 in every (a, l=0) slot and 0 elsewhere, so the
    // initial combiner reproduces the single-FFT demodulator.
    static CombinerState init(const DemodConfig& dc, const SgaParams& params);

    bool training() const { return pilots_consumed < params.pilot_count; }
    int pilots_remaining() const { return std::max(0, params.pilot_count - pilots_consumed); }
};

struct DetectionRecord {
    int block = 0;
    int carrier = 0;
    cplx x;        // combined demodulator output x_k
    cplx bhat;     // differential estimate
    cplx btilde;   // decision (or pilot symbol during training)
    double err_sq = 0.0;
    bool updated = false;
    bool training = false;
    bool degenerate = false;  // |x_prev| below the 1e-12 floor
};

struct DetectionTrace {
    std::vector<DetectionRecord> records;
    std::vector<int> anchors;          // traversal start carrier per block
    std::vector<double> block_mse_db;  // NaN for blocks with no decision-directed events
    long dd_events = 0;
    long symbol_errors = 0;
    long bit_errors = 0;
    int bits_per_symbol = 0;
};

// x_k / x_prev with the denominator floored at 1e-12 in magnitude; a floored
// ratio is flagged so the caller can skip the weight update.
cplx differential_detect(cplx x_k, cplx x_prev, bool* degenerate = nullptr);

// g_k = [z_k x_prev - x_k z_prev] e* / (x_prev)^2, with the squared
// denominator taken as the complex square exactly as the update rule states.
std::vector<cplx> sga_gradient(const std::vector<cplx>& z_k, const std::vector<cplx>& z_prev,
                               cplx x_k, cplx x_prev, cplx e_k);

// |x_prev| g_k
std::vector<cplx> scale_gradient(const std::vector<cplx>& g, cplx x_prev);

// w + mu gbar
std::vector<cplx> update_weights(const std::vector<cplx>& w, const std::vector<cplx>& gbar,
                                 double mu);

// One block of the zigzag traversal: anchor at carrier 0 (flag +1) or K-1
// (flag -1), K-1 detection events, conditional updates, w_temp hand-off and
// flag negation on exit. d_block supplies pilot truth and error accounting.
void run_block(const DemodBankOutput& z, CombinerState& state, const std::vector<cplx>& d_block,
               const PskConstellation& c, int block_index, DetectionTrace& out);

DetectionTrace run_frame(const std::vector<DemodBankOutput>& banks,
                         const std::vector<std::vector<cplx>>& encoded,
                         const PskConstellation& c, const DemodConfig& dc,
                         const SgaParams& params);

// 10 log10(mean |btilde - bhat|^2) over decision-directed events, floored at
// -80 dB; throws std::runtime_error when the trace has none.
double mse_of_trace(const DetectionTrace& trace);
double ber_of_trace(const DetectionTrace& trace);

// CSV export: block,k,x_re,x_im,bhat_re,bhat_im,btilde_re,btilde_im,err_sq,updated
void write_trace_csv(const DetectionTrace& trace, const std::string& path);

}  // namespace uwa
