#pragma once

// Thin RAII wrappers over FFTW. Plans are made with FFTW_ESTIMATE so that the
// chosen algorithm, and hence every output bit, depends only on the size.

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace kdvh {

using cplx = std::complex<double>;

/// Angular wavenumber of DFT index i on a period of length L.
inline double wavenumber(std::size_t i, std::size_t n, double length) {
  const auto s = static_cast<long>(i) - (i > n / 2 ? static_cast<long>(n) : 0L);
  return 2.0 * std::numbers::pi * static_cast<double>(s) / length;
}

namespace detail {

template <class T>
struct fftw_buffer {
  explicit fftw_buffer(std::size_t n) : ptr(static_cast<T*>(fftw_malloc(sizeof(T) * n))), size(n) {
    if (!ptr) throw std::bad_alloc();
  }
  ~fftw_buffer() { fftw_free(ptr); }
  fftw_buffer(const fftw_buffer&) = delete;
  fftw_buffer& operator=(const fftw_buffer&) = delete;
  T* ptr;
  std::size_t size;
};

struct plan_handle {
  plan_handle() = default;
  explicit plan_handle(fftw_plan p) : plan(p) {
    if (!p) throw std::runtime_error("FFTW planning failed");
  }
  ~plan_handle() {
    if (plan) fftw_destroy_plan(plan);
  }
  plan_handle(const plan_handle&) = delete;
  plan_handle& operator=(const plan_handle&) = delete;
  fftw_plan plan = nullptr;
};

}  // namespace detail

/// Real <-> half-complex transform of length n. forward() is unnormalised,
/// inverse() divides by n.
class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        real_(n),
        spec_(n / 2 + 1),
        fwd_(fftw_plan_dft_r2c_1d(static_cast<int>(n), real_.ptr, spec_.ptr, FFTW_ESTIMATE)),
        inv_(fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_.ptr, real_.ptr, FFTW_ESTIMATE)) {}

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<cplx> out) {
    std::copy(in.begin(), in.end(), real_.ptr);
    fftw_execute(fwd_.plan);
    auto* s = reinterpret_cast<cplx*>(spec_.ptr);
    std::copy(s, s + spectrum_size(), out.begin());
  }

  void inverse(std::span<const cplx> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), reinterpret_cast<cplx*>(spec_.ptr));
    fftw_execute(inv_.plan);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = real_.ptr[i] * scale;
  }

 private:
  std::size_t n_;
  detail::fftw_buffer<double> real_;
  detail::fftw_buffer<fftw_complex> spec_;
  detail::plan_handle fwd_;
  detail::plan_handle inv_;
};

/// 2-D complex transform on a row-major (rows x cols) array.
class ComplexFft2d {
 public:
  ComplexFft2d(std::size_t rows, std::size_t cols)
      : rows_(rows),
        cols_(cols),
        buf_(rows * cols),
        fwd_(fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf_.ptr, buf_.ptr,
                              FFTW_FORWARD, FFTW_ESTIMATE)),
        inv_(fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf_.ptr, buf_.ptr,
                              FFTW_BACKWARD, FFTW_ESTIMATE)) {}

  void forward(std::vector<cplx>& data) { run(fwd_.plan, data, 1.0); }
  void inverse(std::vector<cplx>& data) {
    run(inv_.plan, data, 1.0 / static_cast<double>(rows_ * cols_));
  }

 private:
  void run(fftw_plan p, std::vector<cplx>& data, double scale) {
    if (data.size() != rows_ * cols_) throw std::invalid_argument("ComplexFft2d: size mismatch");
    auto* b = reinterpret_cast<cplx*>(buf_.ptr);
    std::copy(data.begin(), data.end(), b);
    fftw_execute(p);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = b[i] * scale;
  }

  std::size_t rows_, cols_;
  detail::fftw_buffer<fftw_complex> buf_;
  detail::plan_handle fwd_;
  detail::plan_handle inv_;
};

}  // namespace kdvh
