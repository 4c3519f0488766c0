#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace openarc {

/// True when n >= 1 has no prime factors other than 2, 3 and 5.
bool is_five_smooth(std::size_t n);

/**
 * Mixed-radix (2, 3, 4, 5) complex FFT of a fixed length.
 *
 * forward:  X_k = sum_j x_j exp(-2 pi i jk / n)
 * backward: x_j = sum_k X_k exp(+2 pi i jk / n)   (unnormalized)
 */
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::span<std::complex<double>> data) const;
    void backward(std::span<std::complex<double>> data) const;

private:
    void transform(std::span<std::complex<double>> data, bool inverse) const;
    void recurse(const std::complex<double>* in, std::size_t stride, std::complex<double>* out,
                 std::size_t n, std::size_t level, bool inverse) const;

    std::size_t n_;
    std::vector<std::size_t> radices_;
    std::vector<std::complex<double>> twiddle_;  // exp(-2 pi i k / n)
};

}  // namespace openarc
