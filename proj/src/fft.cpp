#include "densebeam/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <utility>

#include "densebeam/errors.hpp"

namespace densebeam {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Fft1D::Fft1D(int n) : n_(n) {
  if (n <= 0) throw ConfigError("FFT size must be positive");
  std::lock_guard lock(planner_mutex());
  scratch_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
  forward_plan_ = fftw_plan_dft_1d(n, as_fftw(scratch_), as_fftw(scratch_), FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(n, as_fftw(scratch_), as_fftw(scratch_), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_plan_ || !backward_plan_) {
    release();
    throw Error("FFTW planning failed");
  }
}

Fft1D::~Fft1D() { release(); }

Fft1D::Fft1D(Fft1D&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)),
      scratch_(std::exchange(other.scratch_, nullptr)) {}

Fft1D& Fft1D::operator=(Fft1D&& other) noexcept {
  if (this != &other) {
    release();
    n_ = std::exchange(other.n_, 0);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
    scratch_ = std::exchange(other.scratch_, nullptr);
  }
  return *this;
}

void Fft1D::release() noexcept {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  if (scratch_) fftw_free(scratch_);
  forward_plan_ = backward_plan_ = nullptr;
  scratch_ = nullptr;
}

// Data is staged through the plan's own aligned buffer, so one instance must
// not be shared between threads.
void Fft1D::forward(std::vector<std::complex<double>>& data) const {
  if (static_cast<int>(data.size()) != n_) throw ConfigError("FFT buffer size mismatch");
  std::copy(data.begin(), data.end(), scratch_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::copy(scratch_, scratch_ + n_, data.begin());
}

void Fft1D::backward(std::vector<std::complex<double>>& data) const {
  if (static_cast<int>(data.size()) != n_) throw ConfigError("FFT buffer size mismatch");
  std::copy(data.begin(), data.end(), scratch_);
  fftw_execute(static_cast<fftw_plan>(backward_plan_));
  const double inv = 1.0 / n_;
  for (int i = 0; i < n_; ++i) data[i] = scratch_[i] * inv;
}

}  // namespace densebeam
