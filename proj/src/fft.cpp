#include "lrsdp/fft.hpp"

#include <cmath>

#include "lrsdp/types.hpp"

namespace lrsdp {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace {

void transform(std::complex<double>* data, std::size_t n, double sign) {
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> step(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = data[i + k];
        const std::complex<double> t = data[i + k + len / 2] * w;
        data[i + k] = u + t;
        data[i + k + len / 2] = u - t;
        w *= step;
      }
    }
  }
}

}  // namespace

void fft_forward(std::complex<double>* data, std::size_t n) {
  require(is_power_of_two(n), "fft: length must be a power of two");
  transform(data, n, -1.0);
}

void fft_inverse_unscaled(std::complex<double>* data, std::size_t n) {
  require(is_power_of_two(n), "fft: length must be a power of two");
  transform(data, n, +1.0);
}

void fft_forward(std::vector<std::complex<double>>& data) {
  fft_forward(data.data(), data.size());
}

void fft_inverse_unscaled(std::vector<std::complex<double>>& data) {
  fft_inverse_unscaled(data.data(), data.size());
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
  require(is_power_of_two(n), "fft: length must be a power of two");
  bitrev_.resize(n);
  bitrev_[0] = 0;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    bitrev_[i] = j;
  }
  // forward twiddles for each stage, n/2 entries total per full sweep
  twiddle_.reserve(n);
  for (std::size_t len = 2; len <= n; len <<= 1)
    for (std::size_t k = 0; k < len / 2; ++k) {
      const double ang = -2.0 * M_PI * static_cast<double>(k) /
                         static_cast<double>(len);
      twiddle_.emplace_back(std::cos(ang), std::sin(ang));
    }
}

void FftPlan::run(std::complex<double>* data, bool inverse) const {
  for (std::size_t i = 1; i < n_; ++i)
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
  std::size_t stage = 0;
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::complex<double>* tw = twiddle_.data() + stage;
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < n_; i += len)
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> w = inverse ? std::conj(tw[k]) : tw[k];
        const std::complex<double> u = data[i + k];
        const std::complex<double> t = data[i + k + half] * w;
        data[i + k] = u + t;
        data[i + k + half] = u - t;
      }
    stage += half;
  }
}

void FftPlan::forward(std::complex<double>* data) const { run(data, false); }

void FftPlan::inverse_unscaled(std::complex<double>* data) const {
  run(data, true);
}

}  // namespace lrsdp
