#pragma once

#include <complex>
#include <vector>

namespace densebeam {

/// In-place 1D complex DFT on a fixed-size buffer (FFTW, estimate-planned so
/// that the chosen algorithm, and hence the rounding, is reproducible).
/// Forward is unnormalized; backward divides by n.
class Fft1D {
 public:
  explicit Fft1D(int n);
  ~Fft1D();
  Fft1D(const Fft1D&) = delete;
  Fft1D& operator=(const Fft1D&) = delete;
  Fft1D(Fft1D&& other) noexcept;
  Fft1D& operator=(Fft1D&& other) noexcept;

  int size() const noexcept { return n_; }

  void forward(std::vector<std::complex<double>>& data) const;
  void backward(std::vector<std::complex<double>>& data) const;

 private:
  void release() noexcept;

  int n_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
  std::complex<double>* scratch_ = nullptr;
};

}  // namespace densebeam
