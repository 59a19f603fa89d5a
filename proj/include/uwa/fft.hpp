#pragma once

#include <cstddef>

#include "uwa/types.hpp"

namespace uwa {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 transform with precomputed twiddles. Plans are immutable
// after construction and safe to share across threads; the butterfly order is
// fixed, so outputs are bit-identical from run to run.
class Fft {
  public:
    explicit Fft(std::size_t n);  // n must be a power of two

    void forward(cplx* a) const;  // in place, no scaling
    void inverse(cplx* a) const;  // in place, scales by 1/n

    std::size_t size() const { return n_; }

  private:
    void transform(cplx* a, bool inv) const;

    std::size_t n_;
    std::vector<std::size_t> rev_;
    std::vector<cplx> twiddle_;  // exp(-i*2*pi*j/n), j = 0..n/2-1
};

// Convenience one-shot wrappers (build a plan internally).
std::vector<cplx> fft(std::vector<cplx> a);
std::vector<cplx> ifft(std::vector<cplx> a);

}  // namespace uwa
