#include "uwa/fft.hpp"

#include <cmath>
#include <numbers>

namespace uwa {

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_pow2(n)) throw std::invalid_argument("Fft: length must be a power of two");
    rev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        rev_[i] = r;
    }
    twiddle_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double phase = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        twiddle_[j] = {std::cos(phase), std::sin(phase)};
    }
}

void Fft::transform(cplx* a, bool inv) const {
    for (std::size_t i = 0; i < n_; ++i)
        if (rev_[i] > i) std::swap(a[i], a[rev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t stride = n_ / len;
        for (std::size_t base = 0; base < n_; base += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx w = twiddle_[j * stride];
                if (inv) w = std::conj(w);
                const cplx t = a[base + j + len / 2] * w;
                const cplx u = a[base + j];
                a[base + j] = u + t;
                a[base + j + len / 2] = u - t;
            }
        }
    }
}

void Fft::forward(cplx* a) const { transform(a, false); }

void Fft::inverse(cplx* a) const {
    transform(a, true);
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) a[i] *= s;
}

std::vector<cplx> fft(std::vector<cplx> a) {
    Fft plan(a.size());
    plan.forward(a.data());
    return a;
}

std::vector<cplx> ifft(std::vector<cplx> a) {
    Fft plan(a.size());
    plan.inverse(a.data());
    return a;
}

}  // namespace uwa
