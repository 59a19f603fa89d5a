#include "uwa/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "uwa/transmitter.hpp"

namespace uwa {

const char* method_name(Method m) {
    switch (m) {
        case Method::single: return "single";
        case Method::pfft: return "pfft";
        case Method::ffft: return "ffft";
        case Method::psfft: return "psfft";
    }
    throw std::invalid_argument("method_name: bad enum value");
}

Method parse_method(const std::string& name) {
    if (name == "single") return Method::single;
    if (name == "pfft") return Method::pfft;
    if (name == "ffft") return Method::ffft;
    if (name == "psfft") return Method::psfft;
    throw std::invalid_argument("unknown method '" + name + "' (expected single|pfft|ffft|psfft)");
}

DemodConfig method_demod_config(Method m, double fe_hz) {
    DemodConfig dc;
    dc.fe_hz = fe_hz;
    switch (m) {
        case Method::single: dc.intervals = 1; dc.half_grid = 0; break;
        case Method::pfft:   dc.intervals = 3; dc.half_grid = 0; break;
        case Method::ffft:   dc.intervals = 1; dc.half_grid = 1; break;
        case Method::psfft:  dc.intervals = 3; dc.half_grid = 1; break;
    }
    return dc;
}

std::vector<PathTap> default_taps() {
    // Calibrated six-path profile (delays in seconds). Short concentrated
    // spread: enough frequency selectivity to exercise the combiner without
    // destroying adjacent-carrier coherence at K = 2048.
    return {
        {0.00000, {1.000, 0.0}}, {0.00025, {0.320, 0.0}}, {0.00070, {0.160, 0.0}},
        {0.00180, {0.070, 0.0}}, {0.00450, {0.035, 0.0}}, {0.01000, {0.015, 0.0}},
    };
}

SimParams::SimParams() : taps(default_taps()) {}

SimParams load_sim_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    SimParams p;
    p.geometry = OfdmConfig::from_json_text(text);

    const auto j = nlohmann::json::parse(text);
    if (j.contains("mu")) p.sga.mu = j.at("mu").get<double>();
    if (j.contains("error_threshold")) p.sga.error_threshold = j.at("error_threshold").get<double>();
    if (j.contains("gradient_threshold"))
        p.sga.gradient_threshold = j.at("gradient_threshold").get<double>();
    if (j.contains("pilot_count")) p.sga.pilot_count = j.at("pilot_count").get<int>();
    if (j.contains("fe_hz")) p.fe_hz = j.at("fe_hz").get<double>();
    if (j.contains("modulation_order")) p.modulation_order = j.at("modulation_order").get<int>();
    if (j.contains("trials")) p.trials = j.at("trials").get<int>();
    if (p.trials < 1) throw std::invalid_argument("trials must be >= 1");
    return p;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

TrialOutput run_trial(const DemodConfig& dc, int carriers, int blocks, double alpha,
                      double snr_db, const SimParams& params, std::uint64_t trial_seed,
                      Kernel kernel, bool keep_trace) {
    OfdmConfig cfg = params.geometry;
    cfg.carrier_count = carriers;
    cfg.blocks_per_frame = blocks;
    cfg.lowest_carrier_hz = 0.0;  // re-derive for this carrier count
    cfg.validate();
    validate_taps(params.taps, cfg.guard_s);
    dc.validate();

    const PskConstellation constel = PskConstellation::make(params.modulation_order);

    const std::uint64_t seed_symbols = mix_seed(trial_seed, 0x73796d62ULL);
    const std::uint64_t seed_noise = mix_seed(trial_seed, 0x6e6f6973ULL);

    const FramePlan plan = make_frame_plan(cfg, constel, params.sga.pilot_count, seed_symbols);
    ComplexBlock tx = assemble_frame(plan, cfg);
    ComplexBlock rx = apply_multipath(tx, params.taps, cfg.guard_s);
    if (alpha != 0.0) rx = apply_doppler_per_block(rx, alpha, cfg);
    rx = add_awgn(rx, snr_db, cfg.bandwidth_hz, seed_noise);
    const std::vector<ComplexBlock> baseband = to_baseband(rx, cfg);

    std::vector<DemodBankOutput> banks;
    banks.reserve(baseband.size());
    for (const ComplexBlock& v : baseband)
        banks.push_back(kernel == Kernel::serial ? psfft_demod_reference(v, cfg, dc)
                                                 : psfft_demod(v, cfg, dc));

    TrialOutput out;
    out.trace = run_frame(banks, plan.encoded, constel, dc, params.sga);

    double sum_sq = 0.0;
    for (const DetectionRecord& rec : out.trace.records)
        if (!rec.training) sum_sq += rec.err_sq;
    out.detections = out.trace.dd_events;
    if (out.detections == 0)
        throw std::runtime_error("run_trial: no decision-directed events (pilot budget too large?)");
    out.mse_linear = sum_sq / static_cast<double>(out.detections);
    out.mse_db = 10.0 * std::log10(std::max(out.mse_linear, 1e-8));
    out.ber = ber_of_trace(out.trace);
    if (!keep_trace) out.trace = DetectionTrace{};
    return out;
}

TrialOutput run_trial(Method method, int carriers, int blocks, double alpha, double snr_db,
                      const SimParams& params, std::uint64_t trial_seed, Kernel kernel,
                      bool keep_trace) {
    return run_trial(method_demod_config(method, params.fe_hz), carriers, blocks, alpha, snr_db,
                     params, trial_seed, kernel, keep_trace);
}

PointResult run_point(const DemodConfig& dc, int carriers, int blocks, double alpha,
                      double snr_db, const SimParams& params, std::uint64_t point_seed,
                      Kernel kernel) {
    if (params.trials < 1) throw std::invalid_argument("run_point: trials must be >= 1");
    const int trials = params.trials;

    PointResult res;
    res.trial_mse_db.resize(trials);
    res.trial_ber.resize(trials);
    res.trial_detections.resize(trials);
    std::vector<double> lin(trials);

    // Trials are independent; each owns its slot, so the aggregate is
    // identical no matter how the loop is scheduled.
    std::string error_msg;
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < trials; ++t) {
        try {
            const std::uint64_t trial_seed = mix_seed(point_seed, static_cast<std::uint64_t>(t));
            const TrialOutput to =
                run_trial(dc, carriers, blocks, alpha, snr_db, params, trial_seed, kernel);
            lin[t] = to.mse_linear;
            res.trial_mse_db[t] = to.mse_db;
            res.trial_ber[t] = to.ber;
            res.trial_detections[t] = to.detections;
        } catch (const std::exception& e) {
#pragma omp critical
            error_msg = e.what();
        }
    }
    if (!error_msg.empty()) throw std::runtime_error("run_point: " + error_msg);

    double mean_lin = 0.0, mean_ber = 0.0;
    for (int t = 0; t < trials; ++t) {
        mean_lin += lin[t];
        mean_ber += res.trial_ber[t];
    }
    mean_lin /= trials;
    mean_ber /= trials;
    res.mse_db = 10.0 * std::log10(std::max(mean_lin, 1e-8));
    res.ber = mean_ber;
    return res;
}

PointResult run_point(Method method, int carriers, int blocks, double alpha, double snr_db,
                      const SimParams& params, std::uint64_t point_seed, Kernel kernel) {
    return run_point(method_demod_config(method, params.fe_hz), carriers, blocks, alpha, snr_db,
                     params, point_seed, kernel);
}

namespace {

constexpr int kFrameSymbolBudget = 8192;  // K * N held fixed across sweeps
constexpr std::uint64_t kBaselineStream = 0xb5ULL;

int blocks_for(int carriers) {
    if (carriers < 1 || kFrameSymbolBudget % carriers != 0)
        throw std::invalid_argument("carrier count must divide 8192");
    return kFrameSymbolBudget / carriers;
}

void check_axis(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("sweep axis must not be empty");
    for (size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw std::invalid_argument("sweep axis values must be strictly increasing");
}

// Seed stream per (axis position, curve): independent of which methods were
// requested, so a single-method rerun reproduces the same rows.
std::uint64_t point_stream(std::uint64_t master, size_t axis_idx, std::uint64_t curve_id) {
    return mix_seed(master, (static_cast<std::uint64_t>(axis_idx) << 8) | curve_id);
}

struct Curve {
    std::string label;
    DemodConfig dc;
    std::uint64_t id;
};

std::vector<Curve> curves_for(const SweepSpec& spec) {
    std::vector<Curve> out;
    if (spec.custom_intervals > 0) {
        DemodConfig dc;
        dc.intervals = spec.custom_intervals;
        dc.half_grid = spec.custom_half_grid;
        dc.fe_hz = spec.params.fe_hz;
        out.push_back({"a" + std::to_string(dc.intervals) + "l" + std::to_string(dc.half_grid),
                       dc, 5});
        return out;
    }
    if (spec.methods.empty()) throw std::invalid_argument("sweep: no methods selected");
    for (Method m : spec.methods)
        out.push_back({method_name(m), method_demod_config(m, spec.params.fe_hz),
                       static_cast<std::uint64_t>(m)});
    return out;
}

void append_point(SweepResult& out, const std::string& label, double axis_value,
                  const PointResult& pr) {
    for (size_t t = 0; t < pr.trial_mse_db.size(); ++t)
        out.rows.push_back({label, axis_value, static_cast<int>(t), pr.trial_mse_db[t],
                            pr.trial_ber[t]});
    double mean_ber = 0.0;
    for (double b : pr.trial_ber) mean_ber += b;
    mean_ber /= static_cast<double>(pr.trial_ber.size());
    out.summary.push_back({label, axis_value, pr.mse_db, mean_ber,
                           static_cast<int>(pr.trial_mse_db.size())});
}

}  // namespace

SweepResult sweep_doppler(const SweepSpec& spec) {
    check_axis(spec.values);
    const auto curves = curves_for(spec);
    const int K = spec.fixed_carriers;
    const int N = blocks_for(K);

    SweepResult out;
    out.axis = SweepSpec::Axis::doppler;
    for (size_t i = 0; i < spec.values.size(); ++i) {
        const double alpha = spec.values[i];
        if (std::abs(alpha) > kMaxDopplerFactor)
            throw std::invalid_argument("doppler factor out of range");
        for (const Curve& c : curves) {
            const std::uint64_t seed = point_stream(spec.seed, i, c.id);
            append_point(out, c.label, alpha,
                         run_point(c.dc, K, N, alpha, spec.fixed_snr_db, spec.params, seed,
                                   spec.kernel));
        }
    }
    return out;
}

SweepResult sweep_carriers(const SweepSpec& spec) {
    check_axis(spec.values);
    const auto curves = curves_for(spec);

    SweepResult out;
    out.axis = SweepSpec::Axis::carriers;
    for (size_t i = 0; i < spec.values.size(); ++i) {
        const double kv = spec.values[i];
        const int K = static_cast<int>(std::llround(kv));
        if (static_cast<double>(K) != kv)
            throw std::invalid_argument("carrier axis values must be integers");
        const int N = blocks_for(K);
        for (const Curve& c : curves) {
            const std::uint64_t seed = point_stream(spec.seed, i, c.id);
            append_point(out, c.label, kv,
                         run_point(c.dc, K, N, spec.fixed_alpha, spec.fixed_snr_db, spec.params,
                                   seed, spec.kernel));
        }
        if (spec.include_baseline) {
            // Conventional reference: single-FFT detection with no Doppler,
            // same channel and noise budget.
            const std::uint64_t seed = point_stream(spec.seed, i, kBaselineStream);
            append_point(out, "baseline", kv,
                         run_point(Method::single, K, N, 0.0, spec.fixed_snr_db, spec.params,
                                   seed, spec.kernel));
        }
    }
    return out;
}

SweepResult sweep_snr(const SweepSpec& spec) {
    check_axis(spec.values);
    const auto curves = curves_for(spec);
    const int K = spec.fixed_carriers;
    const int N = blocks_for(K);

    SweepResult out;
    out.axis = SweepSpec::Axis::snr;
    for (size_t i = 0; i < spec.values.size(); ++i) {
        const double snr = spec.values[i];
        for (const Curve& c : curves) {
            const std::uint64_t seed = point_stream(spec.seed, i, c.id);
            append_point(out, c.label, snr,
                         run_point(c.dc, K, N, spec.fixed_alpha, snr, spec.params, seed,
                                   spec.kernel));
        }
    }
    return out;
}

std::vector<double> default_doppler_axis() { return {1e-6, 1e-5, 5e-5, 1e-4, 2e-4, 3e-4}; }
std::vector<double> default_carrier_axis() { return {64, 128, 256, 512, 1024, 2048}; }
std::vector<double> default_snr_axis() { return {10, 15, 20, 25, 30}; }

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string sweep_csv_text(const SweepResult& result) {
    std::string text = "method,axis,trial,mse_db,ber\n";
    char line[160];
    for (const SweepRow& r : result.rows) {
        std::snprintf(line, sizeof(line), "%s,%.10g,%d,%.4f,%.6f\n", r.method.c_str(), r.axis,
                      r.trial, r.mse_db, r.ber);
        text += line;
    }
    return text;
}

std::string summary_csv_text(const SweepResult& result) {
    std::string text = "method,axis,mean_mse_db,mean_ber,trials\n";
    char line[160];
    for (const SweepSummaryRow& r : result.summary) {
        std::snprintf(line, sizeof(line), "%s,%.10g,%.4f,%.6f,%d\n", r.method.c_str(), r.axis,
                      r.mse_db, r.ber, r.trials);
        text += line;
    }
    return text;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
    write_text(path, sweep_csv_text(result));
}

void write_summary_csv(const SweepResult& result, const std::string& path) {
    write_text(path, summary_csv_text(result));
}

double bandwidth_efficiency(int modulation_order, double guard_s, double bandwidth_hz,
                            int carriers) {
    if (modulation_order < 2 || carriers < 1 || bandwidth_hz <= 0.0 || guard_s < 0.0)
        throw std::invalid_argument("bandwidth_efficiency: bad arguments");
    const double bits = std::log2(static_cast<double>(modulation_order));
    return bits / (1.0 + guard_s * bandwidth_hz / static_cast<double>(carriers));
}

}  // namespace uwa
