#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "uwa/detector.hpp"

using uwa::cplx;

namespace {

uwa::DemodBankOutput random_bank(int carriers, int intervals, int half_grid, std::uint64_t seed) {
    uwa::DemodBankOutput z;
    z.carriers = carriers;
    z.intervals = intervals;
    z.half_grid = half_grid;
    z.data.resize(static_cast<size_t>(carriers) * z.dimension());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : z.data) v = {u(rng), u(rng)};
    return z;
}

std::vector<std::vector<cplx>> random_encoded(int blocks, int carriers,
                                              const uwa::PskConstellation& c,
                                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<cplx>> enc(blocks);
    for (auto& blk : enc) {
        blk.resize(carriers);
        blk[0] = c.symbols[0];
        for (int k = 1; k < carriers; ++k)
            blk[k] = blk[k - 1] * c.symbols[rng() % c.symbols.size()];
    }
    return enc;
}

}  // namespace

TEST_CASE("differential detection divides consecutive outputs") {
    CHECK(std::abs(uwa::differential_detect(cplx{0, 1}, cplx{1, 0}) - cplx{0, 1}) < 1e-15);
    CHECK(std::abs(uwa::differential_detect(cplx{1, 0}, cplx{0, 1}) - cplx{0, -1}) < 1e-15);
    CHECK(std::abs(uwa::differential_detect(cplx{-2, 0}, cplx{2, 0}) - cplx{-1, 0}) < 1e-15);
}

TEST_CASE("a vanishing denominator is floored and flagged") {
    bool degenerate = false;
    const cplx r = uwa::differential_detect(cplx{1e-6, 0}, cplx{0, 0}, &degenerate);
    CHECK(degenerate);
    CHECK(std::abs(r) == doctest::Approx(1e6).epsilon(1e-9));
    degenerate = true;
    uwa::differential_detect(cplx{1, 0}, cplx{1, 0}, &degenerate);
    CHECK_FALSE(degenerate);
}

TEST_CASE("gradient matches central finite differences of the objective") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int dim = 4;
    const double h = 1e-6;
    const auto c = uwa::PskConstellation::make(4);
    int checked = 0;
    while (checked < 10) {
        std::vector<cplx> zk(dim), zp(dim), w(dim);
        for (int i = 0; i < dim; ++i) {
            zk[i] = {u(rng), u(rng)};
            zp[i] = {u(rng), u(rng)};
            w[i] = {u(rng), u(rng)};
        }
        const cplx btilde = c.symbols[rng() % 4];
        const cplx xp0 = uwa::combine(w, zp);
        if (std::abs(xp0) < 0.3) continue;  // keep the quotient well conditioned
        ++checked;

        const auto objective = [&](const std::vector<cplx>& wv) {
            const cplx xk = uwa::combine(wv, zk);
            const cplx xp = uwa::combine(wv, zp);
            return std::norm(btilde - xk / xp);
        };
        const cplx xk0 = uwa::combine(w, zk);
        const cplx e = btilde - xk0 / xp0;
        const auto g = uwa::sga_gradient(zk, zp, xk0, xp0, e);

        for (int i = 0; i < dim; ++i) {
            auto wp = w, wm = w;
            wp[i] += h;
            wm[i] -= h;
            const double d_re = (objective(wp) - objective(wm)) / (2 * h);
            wp = w;
            wm = w;
            wp[i] += cplx{0, h};
            wm[i] -= cplx{0, h};
            const double d_im = (objective(wp) - objective(wm)) / (2 * h);
            // Descent direction: gradient of J wrt (Re, Im) is (-2 Re g, -2 Im g).
            CHECK(d_re == doctest::Approx(-2.0 * g[i].real()).epsilon(1e-4));
            CHECK(d_im == doctest::Approx(-2.0 * g[i].imag()).epsilon(1e-4));
        }
    }
}

TEST_CASE("gradient scaling and the weight update are exact arithmetic") {
    const std::vector<cplx> g = {cplx{1, 1}, cplx{-2, 0}};
    const auto gbar = uwa::scale_gradient(g, cplx{3, 4});  // |x_prev| = 5
    CHECK(gbar[0] == cplx{5, 5});
    CHECK(gbar[1] == cplx{-10, 0});
    const auto w = uwa::update_weights({cplx{1, 0}, cplx{0, 0}}, gbar, 0.1);
    CHECK(std::abs(w[0] - cplx{1.5, 0.5}) < 1e-15);
    CHECK(std::abs(w[1] - cplx{-1.0, 0.0}) < 1e-15);
}

TEST_CASE("initial weights reproduce the window sum") {
    uwa::DemodConfig dc;
    dc.intervals = 3;
    dc.half_grid = 1;
    dc.fe_hz = 19.2;
    uwa::SgaParams p;
    const auto st = uwa::CombinerState::init(dc, p);
    REQUIRE(st.w_temp.size() == 9);
    for (int a = 0; a < 3; ++a)
        for (int l = -1; l <= 1; ++l)
            CHECK(st.w_temp[a * 3 + (l + 1)] == (l == 0 ? cplx{1, 0} : cplx{0, 0}));
    CHECK(st.flag == 1);
    CHECK(st.pilots_consumed == 0);
}

TEST_CASE("traversal anchors zigzag and flags alternate") {
    const int K = 16, N = 4;
    const auto c = uwa::PskConstellation::make(4);
    uwa::DemodConfig dc;
    dc.intervals = 2;
    dc.half_grid = 0;
    std::vector<uwa::DemodBankOutput> banks;
    for (int m = 0; m < N; ++m) banks.push_back(random_bank(K, 2, 0, 100 + m));
    uwa::SgaParams p;
    p.pilot_count = 5;
    const auto trace = uwa::run_frame(banks, random_encoded(N, K, c, 7), c, dc, p);
    REQUIRE(trace.anchors.size() == 4);
    CHECK(trace.anchors[0] == 0);
    CHECK(trace.anchors[1] == K - 1);
    CHECK(trace.anchors[2] == 0);
    CHECK(trace.anchors[3] == K - 1);
    CHECK(trace.records.size() == static_cast<size_t>(N * (K - 1)));
    // Block 1 walks downward: its records run K-2 .. 0.
    CHECK(trace.records[K - 1].block == 1);
    CHECK(trace.records[K - 1].carrier == K - 2);
    CHECK(trace.records[2 * (K - 1) - 1].carrier == 0);
}

TEST_CASE("training covers exactly the pilot budget") {
    const int K = 16, N = 2;
    const auto c = uwa::PskConstellation::make(4);
    uwa::DemodConfig dc;  // single output
    std::vector<uwa::DemodBankOutput> banks;
    for (int m = 0; m < N; ++m) banks.push_back(random_bank(K, 1, 0, 200 + m));
    uwa::SgaParams p;
    p.pilot_count = K + 2;  // block 0 entirely + anchor and one event of block 1
    const auto trace = uwa::run_frame(banks, random_encoded(N, K, c, 8), c, dc, p);
    int training = 0;
    for (const auto& r : trace.records) training += r.training ? 1 : 0;
    CHECK(training == K);  // K-1 events in block 0, anchor of block 1, one event
    CHECK(trace.dd_events == static_cast<long>(trace.records.size()) - K);
}

TEST_CASE("zero step size keeps the initial combiner so x is the window sum") {
    const int K = 8, N = 2;
    const auto c = uwa::PskConstellation::make(4);
    uwa::DemodConfig dc;
    dc.intervals = 3;
    dc.half_grid = 1;
    dc.fe_hz = 19.2;
    std::vector<uwa::DemodBankOutput> banks;
    for (int m = 0; m < N; ++m) banks.push_back(random_bank(K, 3, 1, 300 + m));
    uwa::SgaParams p;
    p.mu = 0.0;
    p.pilot_count = 3;
    const auto trace = uwa::run_frame(banks, random_encoded(N, K, c, 9), c, dc, p);
    for (const auto& r : trace.records) {
        cplx sum{0, 0};
        for (int a = 0; a < 3; ++a) sum += banks[r.block].at(r.carrier, a, 0);
        CHECK(std::abs(r.x - sum) < 1e-12);
    }
}

TEST_CASE("detection ratios are invariant to a common scaling of the bank") {
    const int K = 8, N = 2;
    const auto c = uwa::PskConstellation::make(4);
    uwa::DemodConfig dc;
    dc.intervals = 2;
    dc.half_grid = 0;
    std::vector<uwa::DemodBankOutput> banks, scaled;
    for (int m = 0; m < N; ++m) {
        banks.push_back(random_bank(K, 2, 0, 400 + m));
        scaled.push_back(banks.back());
        for (auto& v : scaled.back().data) v *= 3.0;
    }
    uwa::SgaParams p;
    p.mu = 0.0;
    p.pilot_count = 0;
    const auto enc = random_encoded(N, K, c, 10);
    const auto a = uwa::run_frame(banks, enc, c, dc, p);
    const auto b = uwa::run_frame(scaled, enc, c, dc, p);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i)
        CHECK(std::abs(a.records[i].bhat - b.records[i].bhat) < 1e-12);
}

TEST_CASE("impossible thresholds suppress every update") {
    const int K = 8, N = 2;
    const auto c = uwa::PskConstellation::make(4);
    uwa::DemodConfig dc;
    std::vector<uwa::DemodBankOutput> banks;
    for (int m = 0; m < N; ++m) banks.push_back(random_bank(K, 1, 0, 500 + m));
    uwa::SgaParams p;
    p.gradient_threshold = 0.0;  // ||g||^2 < 0 can never hold
    p.pilot_count = 2;
    const auto trace = uwa::run_frame(banks, random_encoded(N, K, c, 11), c, dc, p);
    for (const auto& r : trace.records) CHECK_FALSE(r.updated);
}

TEST_CASE("an all-zero bank produces degenerate flagged records") {
    const int K = 4, N = 1;
    const auto c = uwa::PskConstellation::make(4);
    uwa::DemodConfig dc;
    uwa::DemodBankOutput z;
    z.carriers = K;
    z.intervals = 1;
    z.half_grid = 0;
    z.data.assign(K, cplx{0, 0});
    uwa::SgaParams p;
    p.pilot_count = 0;
    const auto trace = uwa::run_frame({z}, random_encoded(N, K, c, 12), c, dc, p);
    for (const auto& r : trace.records) CHECK(r.degenerate);
}

TEST_CASE("trace mse follows the decision-directed mean with a floor") {
    uwa::DetectionTrace tr;
    uwa::DetectionRecord r;
    r.training = false;
    r.err_sq = 0.01;
    tr.records.push_back(r);
    tr.records.push_back(r);
    tr.dd_events = 2;
    CHECK(uwa::mse_of_trace(tr) == doctest::Approx(-20.0).epsilon(1e-12));

    for (auto& rec : tr.records) rec.err_sq = 0.0;
    CHECK(uwa::mse_of_trace(tr) == doctest::Approx(-80.0).epsilon(1e-12));

    uwa::DetectionTrace empty;
    CHECK_THROWS_AS(uwa::mse_of_trace(empty), std::runtime_error);
}

TEST_CASE("trace ber divides bit errors by transmitted bits") {
    uwa::DetectionTrace tr;
    tr.dd_events = 6;
    tr.bit_errors = 3;
    tr.bits_per_symbol = 2;
    CHECK(uwa::ber_of_trace(tr) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("trace csv export carries the documented columns") {
    const int K = 8, N = 1;
    const auto c = uwa::PskConstellation::make(4);
    uwa::DemodConfig dc;
    std::vector<uwa::DemodBankOutput> banks = {random_bank(K, 1, 0, 600)};
    uwa::SgaParams p;
    p.pilot_count = 2;
    const auto trace = uwa::run_frame(banks, random_encoded(N, K, c, 13), c, dc, p);
    const std::string path = "trace_test.csv";
    uwa::write_trace_csv(trace, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "block,k,x_re,x_im,bhat_re,bhat_im,btilde_re,btilde_im,err_sq,updated");
    size_t lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) {
            ++lines;
            CHECK(std::count(line.begin(), line.end(), ',') == 9);
        }
    CHECK(lines == trace.records.size());
    std::remove(path.c_str());
}
