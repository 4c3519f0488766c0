#include "openarc/fft.hpp"

#include <array>
#include <numbers>
#include <stdexcept>

namespace openarc {

bool is_five_smooth(std::size_t n)
{
    if (n == 0) {
        return false;
    }
    for (std::size_t p : {2u, 3u, 5u}) {
        while (n % p == 0) {
            n /= p;
        }
    }
    return n == 1;
}

Fft::Fft(std::size_t n) : n_(n)
{
    if (!is_five_smooth(n)) {
        throw std::invalid_argument("FFT length must be 2^a 3^b 5^c");
    }
    std::size_t rest = n;
    while (rest % 4 == 0) {
        radices_.push_back(4);
        rest /= 4;
    }
    for (std::size_t p : {2u, 3u, 5u}) {
        while (rest % p == 0) {
            radices_.push_back(p);
            rest /= p;
        }
    }
    twiddle_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle_[k] = {std::cos(angle), std::sin(angle)};
    }
}

void Fft::forward(std::span<std::complex<double>> data) const { transform(data, false); }

void Fft::backward(std::span<std::complex<double>> data) const { transform(data, true); }

void Fft::transform(std::span<std::complex<double>> data, bool inverse) const
{
    if (data.size() != n_) {
        throw std::invalid_argument("FFT input length mismatch");
    }
    if (n_ == 1) {
        return;
    }
    std::vector<std::complex<double>> input(data.begin(), data.end());
    recurse(input.data(), 1, data.data(), n_, 0, inverse);
}

// Decimation in time: out[q*m .. q*m+m) receives the length-m transform of the
// q-th decimated subsequence, then radix-p butterflies combine them in place.
void Fft::recurse(const std::complex<double>* in, std::size_t stride, std::complex<double>* out,
                  std::size_t n, std::size_t level, bool inverse) const
{
    if (n == 1) {
        out[0] = in[0];
        return;
    }
    const std::size_t p = radices_[level];
    const std::size_t m = n / p;
    for (std::size_t q = 0; q < p; ++q) {
        recurse(in + q * stride, stride * p, out + q * m, m, level + 1, inverse);
    }

    const std::size_t step = n_ / n;  // twiddle index scale for this level
    std::array<std::complex<double>, 5> t{};
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t q = 0; q < p; ++q) {
            std::complex<double> w = twiddle_[(q * k * step) % n_];
            if (inverse) {
                w = std::conj(w);
            }
            t[q] = w * out[q * m + k];
        }
        for (std::size_t s = 0; s < p; ++s) {
            std::complex<double> acc = t[0];
            for (std::size_t q = 1; q < p; ++q) {
                std::complex<double> w = twiddle_[(q * s * m * step) % n_];
                if (inverse) {
                    w = std::conj(w);
                }
                acc += w * t[q];
            }
            out[s * m + k] = acc;
        }
    }
}

}  // namespace openarc
