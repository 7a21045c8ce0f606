#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace rotmorse::detail {

/// In-place complex FFT of fixed length on an owned, FFTW-aligned buffer.
/// Plan creation is not thread-safe in FFTW; construct plans on one thread.
class FftPlan {
 public:
  enum class Direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

  FftPlan(std::size_t size, Direction dir)
      : size_(size),
        buffer_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size))) {
    plan_.reset(fftw_plan_dft_1d(static_cast<int>(size), buffer_.get(), buffer_.get(),
                                 static_cast<int>(dir), FFTW_ESTIMATE));
  }

  std::span<std::complex<double>> data() {
    return {reinterpret_cast<std::complex<double>*>(buffer_.get()), size_};
  }

  void execute() { fftw_execute(plan_.get()); }

  std::size_t size() const { return size_; }

 private:
  struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
  };
  struct BufferDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
  };

  std::size_t size_;
  std::unique_ptr<fftw_complex, BufferDeleter> buffer_;
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan_;
};

}  // namespace rotmorse::detail
