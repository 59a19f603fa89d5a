// uwasim: benchmark CLI for the differentially coherent OFDM simulator.
//
//   uwasim sweep doppler|carriers|snr --out results.csv [options]
//   uwasim point --method psfft --alpha 3e-4 [options]
//   uwasim calibrate [options]
//   uwasim dump-frame --out frame.bin [options]
//   uwasim info [options]
//
// Sweeps write one CSV row per (method, axis point, trial) plus a
// <out>.summary.csv with per-point means. Same seed, same bytes.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uwa/bench.hpp"
#include "uwa/transmitter.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string channel_profile;
    int trials = -1;  // -1: keep config default
    std::uint64_t seed = 1;
    std::string out;
    std::string methods = "single,pfft,ffft,psfft";
    double alpha = std::nan("");
    double snr_db = std::nan("");
    int intervals = -1;
    int half_grid = -1;
    double fe_hz = std::nan("");
    std::string kernel = "parallel";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_out) {
    cmd->add_option("--config", o.config_path, "Simulation config JSON");
    cmd->add_option("--channel-profile", o.channel_profile,
                    "Channel profile JSON (taps, doppler_factor, snr_db)");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials per point");
    cmd->add_option("--seed", o.seed, "Master seed");
    auto* out = cmd->add_option("--out", o.out, "Output CSV path");
    if (needs_out) out->required();
    cmd->add_option("--alpha", o.alpha, "Doppler factor (fixed axis value)");
    cmd->add_option("--snr-db", o.snr_db, "SNR in dB (fixed axis value)");
    cmd->add_option("--intervals", o.intervals,
                    "Override demodulator intervals A (replaces the method list with one custom curve)");
    cmd->add_option("--half-grid", o.half_grid,
                    "Override frequency half-grid L (replaces the method list with one custom curve)");
    cmd->add_option("--fe-hz", o.fe_hz,
                    "Frequency grid excursion f_e in Hz (largest expected Doppler shift)");
    cmd->add_option("--kernel", o.kernel, "Demodulator kernel: parallel|serial")
        ->check(CLI::IsMember({"parallel", "serial"}));
}

std::vector<uwa::Method> parse_methods(const std::string& list) {
    std::vector<uwa::Method> out;
    std::string cur;
    for (char ch : list + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(uwa::parse_method(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (out.empty()) throw std::invalid_argument("--methods list is empty");
    return out;
}

// Layer config file, channel profile and CLI flags into a SweepSpec.
// Precedence: CLI flag > channel profile > config file default.
uwa::SweepSpec build_spec(const CommonOpts& o) {
    uwa::SweepSpec spec;
    if (!o.config_path.empty()) spec.params = uwa::load_sim_params(o.config_path);
    if (!o.channel_profile.empty()) {
        const uwa::ChannelRealization ch = uwa::load_channel_profile(o.channel_profile);
        spec.params.taps = ch.taps;
        spec.fixed_alpha = ch.doppler_factor;
        if (std::isfinite(ch.snr_db)) spec.fixed_snr_db = ch.snr_db;
    }
    if (o.trials > 0) spec.params.trials = o.trials;
    if (!std::isnan(o.alpha)) spec.fixed_alpha = o.alpha;
    if (!std::isnan(o.snr_db)) spec.fixed_snr_db = o.snr_db;
    if (!std::isnan(o.fe_hz)) spec.params.fe_hz = o.fe_hz;
    spec.seed = o.seed;
    spec.kernel = o.kernel == "serial" ? uwa::Kernel::serial : uwa::Kernel::parallel;
    spec.methods = parse_methods(o.methods);
    spec.fixed_carriers = spec.params.geometry.carrier_count;
    return spec;
}

int write_outputs(const uwa::SweepResult& res, const std::string& out) {
    uwa::write_sweep_csv(res, out);
    const std::string summary = out + ".summary.csv";
    uwa::write_summary_csv(res, summary);
    std::cout << "wrote " << res.rows.size() << " rows to " << out << "\n";
    std::cout << "wrote " << res.summary.size() << " summary rows to " << summary << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Underwater-acoustic OFDM differential-detection benchmark"};
    app.require_subcommand(1);

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep and write CSV");
    sweep->require_subcommand(1);
    CommonOpts so;
    std::string custom_axis;
    auto* sw_doppler = sweep->add_subcommand("doppler", "MSE vs Doppler factor");
    auto* sw_carriers = sweep->add_subcommand("carriers", "MSE vs carrier count (K*N = 8192)");
    auto* sw_snr = sweep->add_subcommand("snr", "MSE vs SNR");
    for (CLI::App* c : {sw_doppler, sw_carriers, sw_snr}) {
        add_common(c, so, /*needs_out=*/true);
        c->add_option("--methods", so.methods,
                      "Comma-separated subset of single,pfft,ffft,psfft");
        c->add_option("--axis", custom_axis,
                      "Comma-separated axis values (default: built-in axis)");
    }
    bool no_baseline = false;
    sw_carriers->add_flag("--no-baseline", no_baseline,
                          "Skip the alpha=0 single-FFT baseline curve");

    // ---- point ----
    auto* point = app.add_subcommand("point", "Run one (method, K, alpha, SNR) point");
    CommonOpts po;
    std::string point_method = "psfft";
    int point_carriers = 0, point_blocks = 0;
    std::string trace_path;
    add_common(point, po, /*needs_out=*/false);
    point->add_option("--method", point_method, "single|pfft|ffft|psfft");
    point->add_option("--carriers", point_carriers, "Carrier count K (default: config)");
    point->add_option("--blocks", point_blocks, "Blocks per frame N (default: 8192/K)");
    point->add_option("--trace", trace_path, "Write trial-0 detection trace CSV here");

    // ---- calibrate ----
    auto* cal = app.add_subcommand("calibrate",
                                   "Grid-search mu and error threshold at the reference point");
    CommonOpts co;
    add_common(cal, co, /*needs_out=*/false);

    // ---- dump-frame ----
    auto* dump = app.add_subcommand("dump-frame", "Synthesize one frame and dump passband samples");
    CommonOpts dco;
    int dump_carriers = 0, dump_blocks = 0;
    add_common(dump, dco, /*needs_out=*/true);
    dump->add_option("--carriers", dump_carriers, "Carrier count K (default: config)");
    dump->add_option("--blocks", dump_blocks, "Blocks per frame N (default: config)");

    // ---- info ----
    auto* info = app.add_subcommand("info", "Print derived geometry and bandwidth efficiency");
    CommonOpts io;
    add_common(info, io, /*needs_out=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            uwa::SweepSpec spec = build_spec(so);
            if (so.intervals > 0 || so.half_grid >= 0) {
                // An explicit demodulator geometry replaces the method list;
                // the curve is labelled "a<A>l<L>" in the CSV.
                spec.custom_intervals = so.intervals > 0 ? so.intervals : 1;
                spec.custom_half_grid = so.half_grid >= 0 ? so.half_grid : 0;
            }
            if (!custom_axis.empty()) {
                std::string cur;
                for (char ch : custom_axis + ",") {
                    if (ch == ',') {
                        if (!cur.empty()) spec.values.push_back(std::stod(cur));
                        cur.clear();
                    } else {
                        cur += ch;
                    }
                }
            }
            uwa::SweepResult res;
            if (sw_doppler->parsed()) {
                if (spec.values.empty()) spec.values = uwa::default_doppler_axis();
                res = uwa::sweep_doppler(spec);
            } else if (sw_carriers->parsed()) {
                if (spec.values.empty()) spec.values = uwa::default_carrier_axis();
                spec.include_baseline = !no_baseline;
                res = uwa::sweep_carriers(spec);
            } else {
                if (spec.values.empty()) spec.values = uwa::default_snr_axis();
                res = uwa::sweep_snr(spec);
            }
            return write_outputs(res, so.out);
        }

        if (point->parsed()) {
            uwa::SweepSpec spec = build_spec(po);
            const uwa::SimParams& params = spec.params;
            uwa::DemodConfig dc =
                uwa::method_demod_config(uwa::parse_method(point_method), params.fe_hz);
            std::string label = point_method;
            if (po.intervals > 0 || po.half_grid >= 0) {
                dc.intervals = po.intervals > 0 ? po.intervals : 1;
                dc.half_grid = po.half_grid >= 0 ? po.half_grid : 0;
                label = "a" + std::to_string(dc.intervals) + "l" + std::to_string(dc.half_grid);
            }
            int K = point_carriers > 0 ? point_carriers : params.geometry.carrier_count;
            int N = point_blocks > 0 ? point_blocks
                                     : (8192 % K == 0 ? 8192 / K
                                                      : params.geometry.blocks_per_frame);
            const double alpha = std::isnan(po.alpha) ? spec.fixed_alpha : po.alpha;
            const double snr = std::isnan(po.snr_db) ? spec.fixed_snr_db : po.snr_db;
            const std::uint64_t point_seed = uwa::mix_seed(po.seed, 0);
            const uwa::PointResult pr =
                uwa::run_point(dc, K, N, alpha, snr, params, point_seed, spec.kernel);
            std::printf("method=%s K=%d N=%d alpha=%g snr_db=%g trials=%zu\n", label.c_str(), K, N,
                        alpha, snr, pr.trial_mse_db.size());
            for (size_t t = 0; t < pr.trial_mse_db.size(); ++t)
                std::printf("  trial %zu: mse_db=%.4f ber=%.6f detections=%ld\n", t,
                            pr.trial_mse_db[t], pr.trial_ber[t], pr.trial_detections[t]);
            std::printf("aggregate: mse_db=%.4f ber=%.6f\n", pr.mse_db, pr.ber);
            if (!trace_path.empty()) {
                const uwa::TrialOutput to =
                    uwa::run_trial(dc, K, N, alpha, snr, params, uwa::mix_seed(point_seed, 0),
                                   spec.kernel, /*keep_trace=*/true);
                uwa::write_trace_csv(to.trace, trace_path);
                std::printf("trace (%zu events) written to %s\n", to.trace.records.size(),
                            trace_path.c_str());
            }
            return 0;
        }

        if (cal->parsed()) {
            uwa::SweepSpec spec = build_spec(co);
            uwa::SimParams params = spec.params;
            if (co.trials <= 0) params.trials = 4;  // keep the grid affordable
            const int K = 1024, N = 8;
            const double alpha = std::isnan(co.alpha) ? 3e-4 : co.alpha;
            const double snr = std::isnan(co.snr_db) ? 30.0 : co.snr_db;
            const double mus[] = {0.05, 0.10, 0.15, 0.20};
            const double eths[] = {1.0, 2.0, 4.0};
            std::printf("calibration grid at K=%d alpha=%g snr_db=%g trials=%d\n", K, alpha, snr,
                        params.trials);
            std::printf("%-6s %-6s %-12s %-12s %-10s\n", "mu", "e_th", "psfft_db", "ffft_db",
                        "gap_db");
            double best_mse = 1e9, best_mu = 0, best_eth = 0;
            for (double mu : mus) {
                for (double eth : eths) {
                    params.sga.mu = mu;
                    params.sga.error_threshold = eth;
                    const auto ps = uwa::run_point(uwa::Method::psfft, K, N, alpha, snr, params,
                                                   uwa::mix_seed(co.seed, 101), spec.kernel);
                    const auto ff = uwa::run_point(uwa::Method::ffft, K, N, alpha, snr, params,
                                                   uwa::mix_seed(co.seed, 102), spec.kernel);
                    std::printf("%-6.2f %-6.2f %-12.4f %-12.4f %-10.4f\n", mu, eth, ps.mse_db,
                                ff.mse_db, ff.mse_db - ps.mse_db);
                    if (ps.mse_db < best_mse) {
                        best_mse = ps.mse_db;
                        best_mu = mu;
                        best_eth = eth;
                    }
                }
            }
            std::printf("best: mu=%.2f error_threshold=%.2f (psfft %.4f dB)\n", best_mu, best_eth,
                        best_mse);
            return 0;
        }

        if (dump->parsed()) {
            uwa::SimParams params =
                dco.config_path.empty() ? uwa::SimParams{} : uwa::load_sim_params(dco.config_path);
            uwa::OfdmConfig cfg = params.geometry;
            if (dump_carriers > 0) cfg.carrier_count = dump_carriers;
            if (dump_blocks > 0) cfg.blocks_per_frame = dump_blocks;
            cfg.validate();
            const auto constel = uwa::PskConstellation::make(params.modulation_order);
            const auto plan = uwa::make_frame_plan(cfg, constel, params.sga.pilot_count,
                                                   uwa::mix_seed(dco.seed, 0x647566ULL));
            const uwa::ComplexBlock frame = uwa::assemble_frame(plan, cfg);
            uwa::dump_frame(frame, cfg, dco.out);
            std::printf("wrote %zu samples to %s (+ %s.json)\n", frame.samples.size(),
                        dco.out.c_str(), dco.out.c_str());
            return 0;
        }

        if (info->parsed()) {
            uwa::SimParams params =
                io.config_path.empty() ? uwa::SimParams{} : uwa::load_sim_params(io.config_path);
            const uwa::OfdmConfig& cfg = params.geometry;
            cfg.validate();
            std::printf("carriers (K):            %d\n", cfg.carrier_count);
            std::printf("bandwidth (B):           %.6g Hz\n", cfg.bandwidth_hz);
            std::printf("carrier spacing:         %.10g Hz\n", cfg.delta_f());
            std::printf("block duration (T):      %.10g ms\n", cfg.block_duration() * 1e3);
            std::printf("guard (T_g):             %.10g ms\n", cfg.guard_s * 1e3);
            std::printf("blocks per frame (N):    %d\n", cfg.blocks_per_frame);
            std::printf("sampling rate (f_s):     %.6g Hz\n", cfg.sampling_rate_hz);
            std::printf("oversampling:            %d\n", cfg.oversampling());
            std::printf("lowest carrier (f_0):    %.10g Hz\n", cfg.lowest_carrier());
            std::printf("samples per block:       %d\n", cfg.samples_per_block());
            std::printf("guard samples:           %d\n", cfg.guard_samples());
            std::printf("samples per frame:       %d\n", cfg.samples_per_frame());
            std::printf("bandwidth efficiency:    %.6g bit/s/Hz\n",
                        uwa::bandwidth_efficiency(params.modulation_order, cfg.guard_s,
                                                  cfg.bandwidth_hz, cfg.carrier_count));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
