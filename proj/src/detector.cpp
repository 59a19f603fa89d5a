#include "uwa/detector.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace uwa {

constexpr double kDenomFloor = 1e-12;

CombinerState CombinerState::init(const DemodConfig& dc, const SgaParams& params) {
    dc.validate();
    CombinerState st;
    st.params = params;
    st.w_temp.assign(dc.dimension(), cplx{0.0, 0.0});
    for (int a = 0; a < dc.intervals; ++a)
        st.w_temp[a * (2 * dc.half_grid + 1) + dc.half_grid] = cplx{1.0, 0.0};
    return st;
}

cplx differential_detect(cplx x_k, cplx x_prev, bool* degenerate) {
    const bool floored = std::abs(x_prev) < kDenomFloor;
    if (degenerate) *degenerate = floored;
    return floored ? x_k / cplx{kDenomFloor, 0.0} : x_k / x_prev;
}

std::vector<cplx> sga_gradient(const std::vector<cplx>& z_k, const std::vector<cplx>& z_prev,
                               cplx x_k, cplx x_prev, cplx e_k) {
    if (z_k.size() != z_prev.size())
        throw std::invalid_argument("sga_gradient: dimension mismatch");
    const cplx denom = x_prev * x_prev;  // complex square, as printed
    const cplx ec = std::conj(e_k);
    std::vector<cplx> g(z_k.size());
    for (std::size_t i = 0; i < z_k.size(); ++i)
        g[i] = ((z_k[i] * x_prev - x_k * z_prev[i]) * ec) / denom;
    return g;
}

std::vector<cplx> scale_gradient(const std::vector<cplx>& g, cplx x_prev) {
    const double s = std::abs(x_prev);
    std::vector<cplx> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = s * g[i];
    return out;
}

std::vector<cplx> update_weights(const std::vector<cplx>& w, const std::vector<cplx>& gbar,
                                 double mu) {
    if (w.size() != gbar.size()) throw std::invalid_argument("update_weights: dimension mismatch");
    std::vector<cplx> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] + mu * gbar[i];
    return out;
}

void run_block(const DemodBankOutput& z, CombinerState& state, const std::vector<cplx>& d_block,
               const PskConstellation& c, int block_index, DetectionTrace& out) {
    const int K = z.carriers;
    const int dim = z.dimension();
    if (static_cast<int>(state.w_temp.size()) != dim)
        throw std::invalid_argument("run_block: state dimension does not match the bank");
    if (static_cast<int>(d_block.size()) != K)
        throw std::invalid_argument("run_block: symbol count does not match the bank");
    out.bits_per_symbol = std::bit_width(static_cast<unsigned>(c.order)) - 1;

    const int flag = state.flag;
    const int anchor = flag == +1 ? 0 : K - 1;
    out.anchors.push_back(anchor);

    std::vector<cplx> w_k = state.w_temp;
    std::vector<cplx> w_next = state.w_temp;
    std::vector<cplx> zk(dim), zprev(dim);

    cplx x_prev = combine(w_k, z.stacked(anchor), dim);
    ++state.pilots_consumed;  // the anchor's symbol is spent seeding the chain

    for (int k = anchor + flag; k >= 0 && k < K; k += flag) {
        w_k = w_next;
        const cplx* zs = z.stacked(k);
        const cplx* zp = z.stacked(k - flag);
        zk.assign(zs, zs + dim);
        zprev.assign(zp, zp + dim);

        const cplx x_k = combine(w_k, zs, dim);
        bool degenerate = false;
        const cplx bhat = differential_detect(x_k, x_prev, &degenerate);
        const cplx true_ratio = d_block[k] * std::conj(d_block[k - flag]);
        const bool training = state.training();
        const cplx btilde = training ? true_ratio : c.symbols[nearest_index(bhat, c)];
        ++state.pilots_consumed;
        const cplx e = btilde - bhat;

        bool updated = false;
        if (!degenerate) {
            const auto g = sga_gradient(zk, zprev, x_k, x_prev, e);
            double gnorm = 0.0;
            for (const cplx& gi : g) gnorm += std::norm(gi);
            if (std::abs(e) < state.params.error_threshold && gnorm < state.params.gradient_threshold) {
                w_next = update_weights(w_k, scale_gradient(g, x_prev), state.params.mu);
                updated = true;
            } else {
                w_next = w_k;
            }
        } else {
            w_next = w_k;  // degenerate ratio: decision stands, update skipped
        }

        if (!training) {
            ++out.dd_events;
            const int di = nearest_index(bhat, c);
            const int ti = nearest_index(true_ratio, c);
            if (di != ti) ++out.symbol_errors;
            out.bit_errors += std::popcount(gray_code(di) ^ gray_code(ti));
        }
        out.records.push_back({block_index, k, x_k, bhat, btilde, std::norm(e), updated, training,
                               degenerate});
        x_prev = x_k;
    }

    state.w_temp = w_next;  // the weight written past the traversal edge
    state.flag = -flag;
}

static double mse_db_over(const DetectionTrace& trace, std::size_t lo, std::size_t hi) {
    double sum = 0.0;
    long n = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        if (trace.records[i].training) continue;
        sum += trace.records[i].err_sq;
        ++n;
    }
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    const double mean = sum / n;
    return mean > 0.0 ? std::max(10.0 * std::log10(mean), -80.0) : -80.0;
}

DetectionTrace run_frame(const std::vector<DemodBankOutput>& banks,
                         const std::vector<std::vector<cplx>>& encoded,
                         const PskConstellation& c, const DemodConfig& dc,
                         const SgaParams& params) {
    if (banks.size() != encoded.size())
        throw std::invalid_argument("run_frame: bank/symbol block count mismatch");
    DetectionTrace trace;
    CombinerState state = CombinerState::init(dc, params);
    for (std::size_t m = 0; m < banks.size(); ++m) {
        const std::size_t before = trace.records.size();
        run_block(banks[m], state, encoded[m], c, static_cast<int>(m), trace);
        trace.block_mse_db.push_back(mse_db_over(trace, before, trace.records.size()));
    }
    return trace;
}

double mse_of_trace(const DetectionTrace& trace) {
    if (trace.records.empty()) throw std::runtime_error("mse_of_trace: empty trace");
    const double v = mse_db_over(trace, 0, trace.records.size());
    if (std::isnan(v)) throw std::runtime_error("mse_of_trace: no decision-directed events");
    return v;
}

double ber_of_trace(const DetectionTrace& trace) {
    if (trace.dd_events == 0) throw std::runtime_error("ber_of_trace: no decision-directed events");
    return static_cast<double>(trace.bit_errors) /
           (static_cast<double>(trace.dd_events) * trace.bits_per_symbol);
}

void write_trace_csv(const DetectionTrace& trace, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_trace_csv: cannot open " + path);
    f << "block,k,x_re,x_im,bhat_re,bhat_im,btilde_re,btilde_im,err_sq,updated\n";
    char line[512];
    for (const DetectionRecord& r : trace.records) {
        std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      r.block, r.carrier, r.x.real(), r.x.imag(), r.bhat.real(), r.bhat.imag(),
                      r.btilde.real(), r.btilde.imag(), r.err_sq, r.updated ? 1 : 0);
        f << line;
    }
}

}  // namespace uwa
