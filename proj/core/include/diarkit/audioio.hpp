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

#ifndef DIARKIT_AUDIOIO_HPP_
#define DIARKIT_AUDIOIO_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "diarkit/annot.hpp"
#include "diarkit/rng.hpp"

namespace diarkit {

// Multichannel audio with samples normalized to [-1, 1].
struct AudioBuffer {
  int sample_rate = 16000;
  std::vector<std::vector<double>> channels;

  int num_channels() const { return static_cast<int>(channels.size()); }
  std::size_t num_samples() const {
    return channels.empty() ? 0 : channels.front().size();
  }
  double duration() const {
    return static_cast<double>(num_samples()) / sample_rate;
  }
  const std::vector<double>& channel(int c) const { return channels.at(c); }

  void validate() const;
};

// Returns one channel as a mono buffer.
AudioBuffer extract_channel(const AudioBuffer& buffer, int channel);

// 16-bit PCM RIFF/WAVE only. read(write(b)) == b within one quantization
// step (2^-15).
AudioBuffer read_wav(const std::string& path);
void write_wav(const AudioBuffer& buffer, const std::string& path);

struct SynthSpec {
  int num_speakers = 2;
  double duration = 30.0;
  double overlap_fraction = 0.0;
  double snr_db = 20.0;
  std::uint64_t seed = 0;
  // When non-empty the output is multichannel: the clean mix is delayed
  // per channel and per-channel noise is added at snr_db.
  std::vector<int> channel_delays;
  std::pair<double, double> turn_len = {1.0, 4.0};
  int sample_rate = 16000;

  void validate() const;
};

struct SynthResult {
  AudioBuffer audio;       // speech + noise, what a caller would record
  Annotation reference;    // exact ground-truth diarization
  AudioBuffer speech;      // clean speech component (for measurements)
  AudioBuffer noise;       // additive noise component
};

// Deterministic multi-speaker conversation generator. Each speaker is white
// noise through a speaker-specific 8-tap filter plus a speaker-specific
// fundamental tone, so speakers have distinct spectral identities without
// any recorded corpus. The returned annotation is the exact schedule used
// for synthesis.
SynthResult synth_conversation(const SynthSpec& spec);

// Simulates a microphone array: channel c is `mono` delayed by delays[c]
// samples plus independent white noise at snr_db (+inf disables noise).
// Output length is padded to the maximum delay.
AudioBuffer synth_array(const AudioBuffer& mono, const std::vector<int>& delays,
                        double snr_db, Rng& rng);

}  // namespace diarkit

#endif  // DIARKIT_AUDIOIO_HPP_
