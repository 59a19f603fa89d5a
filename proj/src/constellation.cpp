#include "uwa/constellation.hpp"

#include <cmath>
#include <numbers>

namespace uwa {

PskConstellation PskConstellation::make(int order) {
    if (order < 2) throw std::invalid_argument("PskConstellation: order must be >= 2");
    PskConstellation c;
    c.order = order;
    c.symbols.reserve(order);
    for (int q = 0; q < order; ++q) c.symbols.push_back(constellation_symbol(q, order));
    return c;
}

cplx constellation_symbol(int q, int order) {
    if (order < 2) throw std::domain_error("constellation_symbol: order must be >= 2");
    if (q < 0 || q >= order) throw std::domain_error("constellation_symbol: index out of range");
    const double phase = 2.0 * std::numbers::pi * q / order;
    return {std::cos(phase), std::sin(phase)};
}

int nearest_index(cplx v, const PskConstellation& c) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error("nearest_index: non-finite input");
    int best = 0;
    double best_d = std::norm(v - c.symbols[0]);
    for (int q = 1; q < c.order; ++q) {
        const double d = std::norm(v - c.symbols[q]);
        if (d < best_d) {  // strict: ties keep the smaller index
            best_d = d;
            best = q;
        }
    }
    return best;
}

cplx nearest_symbol(cplx v, const PskConstellation& c) { return c.symbols[nearest_index(v, c)]; }

}  // namespace uwa
