#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "uwa/constellation.hpp"
#include "uwa/ofdm_config.hpp"
#include "uwa/types.hpp"

namespace uwa {

// Symbols and pilot schedule for one frame. Pilot positions are the first
// pilot_count (block, carrier) pairs in detector traversal order: block 0
// walks carriers upward, block 1 downward, alternating. The traversal anchor
// of each block counts as one consumed pilot slot even though it produces no
// detection event.
struct FramePlan {
    int blocks_per_frame = 0;
    int pilot_count = 0;
    std::vector<std::pair<int, int>> pilot_positions;
    std::vector<std::vector<int>> data_indices;  // per block: K-1 constellation indices b_k
    std::vector<std::vector<cplx>> data;         // per block: K-1 original symbols b_k
    std::vector<std::vector<cplx>> encoded;      // per block: K encoded symbols d_k, d_0 = a_0
};

// d_0 = a0, d_k = b_k * d_{k-1}. b holds K-1 symbols; empty b yields [a0].
std::vector<cplx> differential_encode(const std::vector<cplx>& b, cplx a0);

// Draws uniform data symbols with a seedable generator and encodes each block.
FramePlan make_frame_plan(const OfdmConfig& cfg, const PskConstellation& c, int pilot_count,
                          std::uint64_t seed);

// Real passband block: s(n Ts) = Re{ sum_k d_k exp(i 2 pi f_k n Ts) },
// length samples_per_block. The fast path synthesizes via an inverse FFT;
// modulate_block_reference evaluates the sum directly (kept for testing).
ComplexBlock modulate_block(const std::vector<cplx>& d, const OfdmConfig& cfg);
ComplexBlock modulate_block_reference(const std::vector<cplx>& d, const OfdmConfig& cfg);

// N modulated blocks, each followed by guard_samples() of silence. Block m
// is phased as if transmitted at its true frame offset, so the receiver's
// global f_0 downshift lines up across blocks.
ComplexBlock assemble_frame(const FramePlan& plan, const OfdmConfig& cfg);

// Interleaved re,im little-endian 64-bit floats plus a <path>.json sidecar
// describing the layout; load_frame_dump reads the pair back.
void dump_frame(const ComplexBlock& frame, const OfdmConfig& cfg, const std::string& path);
ComplexBlock load_frame_dump(const std::string& path);

}  // namespace uwa
