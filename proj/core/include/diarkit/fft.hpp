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

#ifndef DIARKIT_FFT_HPP_
#define DIARKIT_FFT_HPP_

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace diarkit {

// Real-input FFT of a fixed length, reusable across many transforms.
// Plan creation is serialized internally (the FFTW planner is not
// thread-safe); execution is reentrant per instance.
class RealFft {
 public:
  explicit RealFft(std::size_t length);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t length() const { return length_; }
  std::size_t num_bins() const { return length_ / 2 + 1; }

  // Input shorter than length() is zero-padded.
  std::vector<std::complex<double>> forward(const std::vector<double>& input);
  // Inverse of forward, normalized by 1/length.
  std::vector<double> inverse(const std::vector<std::complex<double>>& spectrum);

  static std::size_t next_pow2(std::size_t n);

 private:
  struct Impl;
  std::size_t length_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace diarkit

#endif  // DIARKIT_FFT_HPP_
