// Copyright 2026 The diarkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "diarkit/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "diarkit/error.hpp"

namespace diarkit {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

RealFft::RealFft(std::size_t length) : length_(length), impl_(new Impl) {
  if (length_ == 0) throw Error("FFT length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->real = fftw_alloc_real(length_);
  impl_->cplx = fftw_alloc_complex(num_bins());
  impl_->fwd = fftw_plan_dft_r2c_1d(static_cast<int>(length_), impl_->real,
                                    impl_->cplx, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_c2r_1d(static_cast<int>(length_), impl_->cplx,
                                    impl_->real, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->inv);
  fftw_free(impl_->real);
  fftw_free(impl_->cplx);
}

std::vector<std::complex<double>> RealFft::forward(
    const std::vector<double>& input) {
  if (input.size() > length_) throw Error("FFT input longer than plan length");
  std::memset(impl_->real, 0, sizeof(double) * length_);
  std::memcpy(impl_->real, input.data(), sizeof(double) * input.size());
  fftw_execute(impl_->fwd);
  std::vector<std::complex<double>> out(num_bins());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {impl_->cplx[i][0], impl_->cplx[i][1]};
  }
  return out;
}

std::vector<double> RealFft::inverse(
    const std::vector<std::complex<double>>& spectrum) {
  if (spectrum.size() != num_bins()) {
    throw Error("spectrum size does not match plan");
  }
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    impl_->cplx[i][0] = spectrum[i].real();
    impl_->cplx[i][1] = spectrum[i].imag();
  }
  fftw_execute(impl_->inv);
  std::vector<double> out(length_);
  const double scale = 1.0 / static_cast<double>(length_);
  for (std::size_t i = 0; i < length_; ++i) out[i] = impl_->real[i] * scale;
  return out;
}

std::size_t RealFft::next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace diarkit
