#include <beaconseg/fft.hpp>

#include <beaconseg/errors.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace beaconseg::fft {

namespace {

// Plain complex product; operator* adds NaN/inf recovery that costs a
// library call per butterfly.
inline std::complex<double> mul(std::complex<double> a, std::complex<double> b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

} // namespace

std::size_t next_power_of_two(std::size_t n) {
    std::size_t size = 1;
    while (size < n) {
        size <<= 1;
    }
    return size;
}

void radix2(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw InvalidParameter("radix-2 FFT needs a power-of-two length");
    }
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    const double sign = inverse ? 1.0 : -1.0;
    // One table of exp(sign 2 pi i k / n), each entry computed directly to
    // keep the error at O(eps log n); stage L reads every (n/L)-th entry.
    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle[k] = {std::cos(angle), std::sin(angle)};
    }
    for (std::size_t length = 2; length <= n; length <<= 1) {
        const std::size_t half = length / 2;
        const std::size_t stride = n / length;
        for (std::size_t start = 0; start < n; start += length) {
            for (std::size_t k = 0; k < half; ++k) {
                auto u = data[start + k];
                auto v = mul(data[start + k + half], twiddle[k * stride]);
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
    }
}

std::vector<std::complex<double>> dft(std::span<const double> signal) {
    const std::size_t n = signal.size();
    if (n == 0) {
        return {};
    }
    if ((n & (n - 1)) == 0) {
        std::vector<std::complex<double>> data(signal.begin(), signal.end());
        radix2(data);
        return data;
    }

    // X_k = conj(w_k) sum_j (x_j conj(w_j)) w_{k-j}, w_j = exp(i pi j^2 / n).
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t j = 0; j < n; ++j) {
        // j^2 mod 2n keeps the angle argument small.
        std::uint64_t square = (static_cast<std::uint64_t>(j) * j) % (2 * static_cast<std::uint64_t>(n));
        double angle = std::numbers::pi * static_cast<double>(square) / static_cast<double>(n);
        chirp[j] = {std::cos(angle), std::sin(angle)};
    }
    const std::size_t m = next_power_of_two(2 * n - 1);
    std::vector<std::complex<double>> a(m), b(m);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = signal[j] * std::conj(chirp[j]);
    }
    b[0] = chirp[0];
    for (std::size_t j = 1; j < n; ++j) {
        b[j] = chirp[j];
        b[m - j] = chirp[j];
    }
    radix2(a);
    radix2(b);
    for (std::size_t j = 0; j < m; ++j) {
        a[j] = mul(a[j], b[j]);
    }
    radix2(a, true);
    std::vector<std::complex<double>> result(n);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) {
        result[k] = mul(a[k] * scale, std::conj(chirp[k]));
    }
    return result;
}

} // namespace beaconseg::fft
