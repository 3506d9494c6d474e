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

#include "diarkit/audioio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "diarkit/error.hpp"

namespace diarkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] |
                                    (static_cast<std::uint16_t>(p[1]) << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

void AudioBuffer::validate() const {
  if (sample_rate <= 0) throw Error("sample rate must be positive");
  for (const auto& ch : channels) {
    if (ch.size() != channels.front().size()) {
      throw Error("all channels must have equal length");
    }
    for (double s : ch) {
      if (!std::isfinite(s)) throw Error("audio samples must be finite");
    }
  }
}

AudioBuffer extract_channel(const AudioBuffer& buffer, int channel) {
  if (channel < 0 || channel >= buffer.num_channels()) {
    throw Error("channel index " + std::to_string(channel) + " out of range");
  }
  AudioBuffer mono;
  mono.sample_rate = buffer.sample_rate;
  mono.channels.push_back(buffer.channels[channel]);
  return mono;
}

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw Error("'" + path + "' is not a RIFF/WAVE file");
  }

  int channels = 0;
  int sample_rate = 0;
  int bits = 0;
  bool have_fmt = false;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const char* tag = data.data() + pos;
    const std::uint32_t chunk_size = read_u32(bytes + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > data.size()) {
      throw Error("'" + path + "': truncated chunk '" +
                  std::string(tag, 4) + "'");
    }
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw Error("'" + path + "': short fmt chunk");
      const std::uint16_t format = read_u16(bytes + body);
      if (format != 1) {
        throw Error("'" + path + "': only 16-bit PCM supported (format tag " +
                    std::to_string(format) + ")");
      }
      channels = read_u16(bytes + body + 2);
      sample_rate = static_cast<int>(read_u32(bytes + body + 4));
      bits = read_u16(bytes + body + 14);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data_offset = body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw Error("'" + path + "': missing fmt chunk");
  if (data_offset == 0) throw Error("'" + path + "': missing data chunk");
  if (bits != 16) {
    throw Error("'" + path + "': only 16-bit PCM supported, got " +
                std::to_string(bits) + " bits");
  }
  if (channels <= 0 || sample_rate <= 0) {
    throw Error("'" + path + "': invalid fmt chunk");
  }

  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * 2;
  const std::size_t num_frames = data_size / frame_bytes;
  AudioBuffer buffer;
  buffer.sample_rate = sample_rate;
  buffer.channels.assign(channels, std::vector<double>(num_frames));
  const unsigned char* samples = bytes + data_offset;
  for (std::size_t n = 0; n < num_frames; ++n) {
    for (int c = 0; c < channels; ++c) {
      const std::size_t off = n * frame_bytes + static_cast<std::size_t>(c) * 2;
      const auto raw = static_cast<std::int16_t>(
          samples[off] | (static_cast<std::uint16_t>(samples[off + 1]) << 8));
      buffer.channels[c][n] = static_cast<double>(raw) / 32768.0;
    }
  }
  return buffer;
}

void write_wav(const AudioBuffer& buffer, const std::string& path) {
  buffer.validate();
  if (buffer.num_channels() == 0) throw Error("cannot write empty buffer");
  const int channels = buffer.num_channels();
  const std::size_t num_frames = buffer.num_samples();
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(num_frames * channels * 2);

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put_u32(out, 36 + data_size);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, static_cast<std::uint16_t>(channels));
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate * channels * 2));
  put_u16(out, static_cast<std::uint16_t>(channels * 2));
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_size);
  for (std::size_t n = 0; n < num_frames; ++n) {
    for (int c = 0; c < channels; ++c) {
      const double scaled = buffer.channels[c][n] * 32768.0;
      const auto clamped = std::clamp(std::lround(scaled), -32768L, 32767L);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(clamped)));
    }
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw Error("failed writing '" + path + "'");
}

void SynthSpec::validate() const {
  if (num_speakers < 1) throw Error("num_speakers must be >= 1");
  if (!(duration > 0.0)) throw Error("duration must be positive");
  if (overlap_fraction < 0.0 || overlap_fraction > 1.0) {
    throw Error("overlap_fraction must be in [0, 1]");
  }
  if (sample_rate <= 0) throw Error("sample_rate must be positive");
  if (!(turn_len.first > 0.0) || turn_len.second < turn_len.first) {
    throw Error("invalid turn_len range");
  }
  const int max_delay = sample_rate / 4;
  for (int d : channel_delays) {
    if (std::abs(d) > max_delay) {
      throw Error("channel delay " + std::to_string(d) +
                  " exceeds 0.25 * sample_rate");
    }
  }
}

namespace {

struct Voice {
  std::vector<double> taps;  // 8-tap FIR shaping filter, unit norm
  double tone_hz = 0.0;
};

std::vector<Voice> make_voices(int num_speakers, Rng& rng) {
  std::vector<Voice> voices(num_speakers);
  for (int k = 0; k < num_speakers; ++k) {
    Voice& v = voices[k];
    v.taps.resize(8);
    double norm2 = 0.0;
    for (double& t : v.taps) {
      t = rng.gaussian();
      norm2 += t * t;
    }
    const double inv = 1.0 / std::sqrt(std::max(norm2, 1e-12));
    for (double& t : v.taps) t *= inv;
    // Distinct fundamentals, well inside the band.
    v.tone_hz = 150.0 + 170.0 * k + rng.uniform(0.0, 30.0);
  }
  return voices;
}

// Renders one turn of a speaker's voice into `mix` starting at `start`.
void render_turn(std::vector<double>& mix, std::size_t start, std::size_t len,
                 const Voice& voice, int sample_rate, Rng& rng) {
  std::vector<double> white(len);
  for (double& w : white) w = rng.gaussian();
  const double phase0 = rng.uniform(0.0, 2.0 * kPi);
  const double omega = 2.0 * kPi * voice.tone_hz / sample_rate;
  const std::size_t taps = voice.taps.size();
  for (std::size_t n = 0; n < len; ++n) {
    double filtered = 0.0;
    for (std::size_t j = 0; j < taps && j <= n; ++j) {
      filtered += voice.taps[j] * white[n - j];
    }
    const double tone = std::sin(phase0 + omega * static_cast<double>(n));
    mix[start + n] += 0.18 * (0.7 * filtered + 0.4 * tone);
  }
}

}  // namespace

SynthResult synth_conversation(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto voices = make_voices(spec.num_speakers, rng);
  const auto total =
      static_cast<std::size_t>(std::llround(spec.duration * spec.sample_rate));

  // Schedule turns first; the annotation is exactly this schedule.
  struct Turn {
    std::int64_t start_ms, end_ms;
    int speaker;
  };
  std::vector<Turn> turns;
  double t = rng.uniform(0.1, 0.4);
  int turn_idx = 0;
  while (t < spec.duration - 0.35) {
    const int spk = turn_idx % spec.num_speakers;
    const double span = spec.turn_len.second - spec.turn_len.first;
    double len = spec.turn_len.first - 0.5 * span * std::log(1.0 - rng.uniform());
    len = std::min(len, spec.turn_len.second);
    const double end = std::min(t + len, spec.duration);
    if (end - t >= 0.3) {
      turns.push_back(Turn{to_ms(t), to_ms(end), spk});
    }
    const double pause = rng.uniform(0.2, 1.0);
    double next = end + pause;
    if (spec.num_speakers > 1 && rng.uniform() < spec.overlap_fraction) {
      next = end - std::min(rng.uniform(0.3, 0.9), 0.5 * (end - t));
    }
    t = next;
    ++turn_idx;
  }
  if (turns.empty()) {
    // Degenerate very short request: one turn covering most of the file.
    turns.push_back(Turn{0, to_ms(spec.duration), 0});
  }

  Annotation reference("synth");
  std::vector<double> mix(total, 0.0);
  for (const Turn& turn : turns) {
    const auto start = static_cast<std::size_t>(
        std::llround(turn.start_ms * 1e-3 * spec.sample_rate));
    auto end = static_cast<std::size_t>(
        std::llround(turn.end_ms * 1e-3 * spec.sample_rate));
    end = std::min(end, total);
    if (end <= start) continue;
    render_turn(mix, start, end - start, voices[turn.speaker], spec.sample_rate,
                rng);
    reference.add(Segment::from_ms(turn.start_ms, turn.end_ms),
                  "spk" + std::to_string(turn.speaker));
  }
  reference.normalize();

  // Scale noise so that total speech / total noise energy hits snr_db.
  std::vector<double> noise(total, 0.0);
  double speech_energy = 0.0;
  for (double s : mix) speech_energy += s * s;
  if (std::isfinite(spec.snr_db)) {
    double raw_energy = 0.0;
    for (double& n : noise) {
      n = rng.gaussian();
      raw_energy += n * n;
    }
    const double target = speech_energy / std::pow(10.0, spec.snr_db / 10.0);
    const double gain =
        raw_energy > 0.0 ? std::sqrt(target / raw_energy) : 0.0;
    for (double& n : noise) n *= gain;
  }

  SynthResult result;
  result.reference = std::move(reference);
  result.speech.sample_rate = spec.sample_rate;
  result.speech.channels.push_back(mix);
  result.noise.sample_rate = spec.sample_rate;
  result.noise.channels.push_back(noise);

  if (spec.channel_delays.empty()) {
    std::vector<double> observed(total);
    for (std::size_t n = 0; n < total; ++n) {
      observed[n] = std::clamp(mix[n] + noise[n], -0.999, 0.999);
    }
    result.audio.sample_rate = spec.sample_rate;
    result.audio.channels.push_back(std::move(observed));
  } else {
    result.audio =
        synth_array(result.speech, spec.channel_delays, spec.snr_db, rng);
  }
  return result;
}

AudioBuffer synth_array(const AudioBuffer& mono, const std::vector<int>& delays,
                        double snr_db, Rng& rng) {
  if (mono.num_channels() != 1) throw Error("synth_array expects mono input");
  if (delays.empty()) throw Error("synth_array needs at least one delay");
  const auto n = static_cast<std::int64_t>(mono.num_samples());
  int max_delay = 0;
  for (int d : delays) {
    if (std::abs(static_cast<std::int64_t>(d)) >= n) {
      throw Error("delay " + std::to_string(d) + " exceeds buffer length");
    }
    max_delay = std::max(max_delay, d);
  }
  const std::int64_t out_len = n + std::max(0, max_delay);
  const std::vector<double>& src = mono.channels[0];

  double signal_energy = 0.0;
  for (double s : src) signal_energy += s * s;

  AudioBuffer out;
  out.sample_rate = mono.sample_rate;
  out.channels.assign(delays.size(), std::vector<double>(out_len, 0.0));
  for (std::size_t c = 0; c < delays.size(); ++c) {
    auto& ch = out.channels[c];
    const std::int64_t d = delays[c];
    for (std::int64_t i = 0; i < out_len; ++i) {
      const std::int64_t j = i - d;
      if (j >= 0 && j < n) ch[i] = src[j];
    }
    if (std::isfinite(snr_db)) {
      std::vector<double> noise(ch.size());
      double raw_energy = 0.0;
      for (double& v : noise) {
        v = rng.gaussian();
        raw_energy += v * v;
      }
      const double target = signal_energy / std::pow(10.0, snr_db / 10.0);
      const double gain =
          raw_energy > 0.0 ? std::sqrt(target / raw_energy) : 0.0;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        ch[i] = std::clamp(ch[i] + gain * noise[i], -0.999, 0.999);
      }
    }
  }
  return out;
}

}  // namespace diarkit
