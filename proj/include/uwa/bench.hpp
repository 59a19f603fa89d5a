#pragma once

#include <cstdint>
#include <string>

#include "uwa/channel.hpp"
#include "uwa/demod.hpp"
#include "uwa/detector.hpp"
#include "uwa/ofdm_config.hpp"
#include "uwa/types.hpp"

namespace uwa {

enum class Method { single = 0, pfft = 1, ffft = 2, psfft = 3 };

const char* method_name(Method m);
Method parse_method(const std::string& name);  // throws std::invalid_argument

// single -> (A=1, L=0), pfft -> (3, 0), ffft -> (1, 1), psfft -> (3, 1).
DemodConfig method_demod_config(Method m, double fe_hz);

enum class Kernel { parallel, serial };

// Everything a sweep point needs besides (method, K, N, alpha, snr).
struct SimParams {
    OfdmConfig geometry;                 // carrier/block counts overridden per point
    SgaParams sga;
    double fe_hz = 19.2;                 // 2 * alpha_max * f_c for alpha_max = 3e-4
    int modulation_order = 4;
    int trials = 8;
    std::vector<PathTap> taps;

    SimParams();
};

std::vector<PathTap> default_taps();

// Reads the OfdmConfig keys plus the optional tuning keys mu,
// error_threshold, gradient_threshold, pilot_count, fe_hz, modulation_order
// and trials from one JSON file.
SimParams load_sim_params(const std::string& path);

// Deterministic seed mixing (splitmix64); sweeps derive every per-trial seed
// from the master seed through this, so results never depend on scheduling.
std::uint64_t splitmix64(std::uint64_t x);
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

struct TrialOutput {
    double mse_db = 0.0;
    double mse_linear = 0.0;
    double ber = 0.0;
    long detections = 0;
    DetectionTrace trace;
};

// One full transmit/channel/demodulate/detect pass. The DemodConfig form is
// the primitive; the Method form maps through method_demod_config with
// params.fe_hz.
TrialOutput run_trial(const DemodConfig& dc, int carriers, int blocks, double alpha,
                      double snr_db, const SimParams& params, std::uint64_t trial_seed,
                      Kernel kernel, bool keep_trace = false);
TrialOutput run_trial(Method method, int carriers, int blocks, double alpha, double snr_db,
                      const SimParams& params, std::uint64_t trial_seed, Kernel kernel,
                      bool keep_trace = false);

struct PointResult {
    std::vector<double> trial_mse_db;
    std::vector<double> trial_ber;
    std::vector<long> trial_detections;
    double mse_db = 0.0;  // linear trial mean converted to dB once
    double ber = 0.0;
};

PointResult run_point(const DemodConfig& dc, int carriers, int blocks, double alpha,
                      double snr_db, const SimParams& params, std::uint64_t point_seed,
                      Kernel kernel = Kernel::parallel);
PointResult run_point(Method method, int carriers, int blocks, double alpha, double snr_db,
                      const SimParams& params, std::uint64_t point_seed,
                      Kernel kernel = Kernel::parallel);

struct SweepSpec {
    enum class Axis { doppler, carriers, snr };
    Axis axis = Axis::doppler;
    std::vector<double> values;  // strictly increasing
    std::vector<Method> methods{Method::single, Method::pfft, Method::ffft, Method::psfft};
    SimParams params;
    int fixed_carriers = 1024;
    double fixed_alpha = 3e-4;
    double fixed_snr_db = 30.0;
    std::uint64_t seed = 1;
    Kernel kernel = Kernel::parallel;
    // Extra alpha=0 single-FFT curve on the carriers sweep (labelled
    // "baseline" in the CSV).
    bool include_baseline = true;
    // When custom_intervals > 0 the method list is replaced by one curve
    // with this explicit geometry, labelled "a<A>l<L>".
    int custom_intervals = 0;
    int custom_half_grid = 0;
};

struct SweepRow {
    std::string method;
    double axis = 0.0;
    int trial = 0;
    double mse_db = 0.0;
    double ber = 0.0;
};

struct SweepSummaryRow {
    std::string method;
    double axis = 0.0;
    double mse_db = 0.0;
    double ber = 0.0;
    int trials = 0;
};

struct SweepResult {
    SweepSpec::Axis axis = SweepSpec::Axis::doppler;
    std::vector<SweepRow> rows;
    std::vector<SweepSummaryRow> summary;
};

SweepResult sweep_doppler(const SweepSpec& spec);
SweepResult sweep_carriers(const SweepSpec& spec);
SweepResult sweep_snr(const SweepSpec& spec);

std::vector<double> default_doppler_axis();
std::vector<double> default_carrier_axis();
std::vector<double> default_snr_axis();

// Header: method,axis,trial,mse_db,ber. Bytes depend only on the result.
void write_sweep_csv(const SweepResult& result, const std::string& path);
std::string sweep_csv_text(const SweepResult& result);
// Header: method,axis,mean_mse_db,mean_ber,trials.
void write_summary_csv(const SweepResult& result, const std::string& path);
std::string summary_csv_text(const SweepResult& result);

// log2(M) / (1 + T_g B / K), bits/s/Hz.
double bandwidth_efficiency(int modulation_order, double guard_s, double bandwidth_hz,
                            int carriers);

}  // namespace uwa
