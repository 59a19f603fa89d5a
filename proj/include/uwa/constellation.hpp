#pragma once

#include "uwa/types.hpp"

namespace uwa {

// Unit-magnitude PSK alphabet a_q = exp(i*2*pi*q/Q), ordered by increasing phase.
struct PskConstellation {
    int order = 0;
    std::vector<cplx> symbols;

    static PskConstellation make(int order);
};

// exp(i*2*pi*q/Q); throws std::domain_error unless 0 <= q < Q.
cplx constellation_symbol(int q, int order);

// Index of the constellation point minimizing |v - a_q|; ties break toward
// the smaller index so decision traces are reproducible. Throws
// std::domain_error on non-finite input.
int nearest_index(cplx v, const PskConstellation& c);
cplx nearest_symbol(cplx v, const PskConstellation& c);

// Gray code of a constellation index, used for bit-error accounting.
inline unsigned gray_code(unsigned q) { return q ^ (q >> 1); }

}  // namespace uwa
