#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace lrsdp {

bool is_power_of_two(std::size_t n);

// In-place radix-2 transforms for power-of-two lengths.
// Convention: forward is unnormalized, X_k = sum_j x_j e^{-2*pi*i*jk/n};
// inverse_unscaled applies the conjugate twiddles and no 1/n factor,
// x_j = sum_k X_k e^{+2*pi*i*jk/n}.
void fft_forward(std::complex<double>* data, std::size_t n);
void fft_inverse_unscaled(std::complex<double>* data, std::size_t n);

void fft_forward(std::vector<std::complex<double>>& data);
void fft_inverse_unscaled(std::vector<std::complex<double>>& data);

// Precomputed bit-reversal permutation and per-stage twiddle tables for a
// fixed power-of-two length; cheaper than the free functions when the same
// length is transformed many times.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(std::complex<double>* data) const;
  void inverse_unscaled(std::complex<double>* data) const;

 private:
  void run(std::complex<double>* data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;  // concatenated per-stage tables
};

}  // namespace lrsdp
