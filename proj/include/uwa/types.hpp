#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace uwa {

using cplx = std::complex<double>;

// Sampled complex signal segment. Passband signals are carried with zero
// imaginary parts so the whole chain shares one type. `epoch` is the start
// time of the first sample relative to the frame origin, in seconds.
struct ComplexBlock {
    std::vector<cplx> samples;
    double rate = 0.0;   // Hz
    double epoch = 0.0;  // s

    void validate() const {
        if (samples.empty()) throw std::invalid_argument("ComplexBlock: empty sample sequence");
        if (rate <= 0.0) throw std::invalid_argument("ComplexBlock: non-positive sample rate");
    }
};

}  // namespace uwa
