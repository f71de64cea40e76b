#pragma once

#include <complex>
#include <span>
#include <vector>

namespace beaconseg::fft {

//! In-place iterative radix-2 FFT. The size must be a power of two.
//! Forward uses exp(-2 pi i jk/N); inverse is unnormalised.
void radix2(std::vector<std::complex<double>>& data, bool inverse = false);

//! DFT of any length via Bluestein's chirp-z transform on top of radix2.
std::vector<std::complex<double>> dft(std::span<const double> signal);

std::size_t next_power_of_two(std::size_t n);

} // namespace beaconseg::fft
