#pragma once

#include <algorithm>
#include <complex>
#include <vector>

namespace afcsim {

using cvec = std::vector<std::complex<double>>;

// In-place complex FFTs backed by FFTW (power-of-two sizes).
// fft_forward uses the e^{-i 2pi kn/N} kernel, unnormalized;
// fft_inverse uses e^{+i 2pi kn/N} and divides by N, so the pair round-trips.
void fft_forward(cvec& data);
void fft_inverse(cvec& data);

// Rotate between ascending-frequency order and FFT bin order.
// Sizes are even here, so the shift is its own inverse.
template <class T>
void fftshift(std::vector<T>& v) {
    std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
}

}  // namespace afcsim
