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

#ifndef DIARKIT_ANNOT_HPP_
#define DIARKIT_ANNOT_HPP_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace diarkit {

// Rounds a time in seconds to the internal millisecond grid.
std::int64_t to_ms(double seconds);

// Time interval stored as integer milliseconds. All annotation arithmetic
// happens on the millisecond grid so that merging, cropping and scoring
// never depend on floating-point equality.
struct Segment {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;

  // Validates: times finite, start >= 0, end > start after rounding.
  static Segment from_seconds(double start, double end);
  static Segment from_ms(std::int64_t start, std::int64_t end);

  double start() const { return static_cast<double>(start_ms) / 1000.0; }
  double end() const { return static_cast<double>(end_ms) / 1000.0; }
  double duration() const {
    return static_cast<double>(end_ms - start_ms) / 1000.0;
  }
  std::int64_t duration_ms() const { return end_ms - start_ms; }
  bool contains_ms(std::int64_t t) const {
    return t >= start_ms && t < end_ms;
  }

  auto operator<=>(const Segment&) const = default;
};

struct LabeledSegment {
  Segment segment;
  std::string label;

  auto operator<=>(const LabeledSegment&) const = default;
};

// Interval-set algebra on sorted, pairwise-disjoint interval lists.
// merge_intervals accepts any list and returns its union.
std::vector<Segment> merge_intervals(std::vector<Segment> intervals);
std::vector<Segment> intersect_intervals(const std::vector<Segment>& a,
                                         const std::vector<Segment>& b);
std::vector<Segment> subtract_intervals(const std::vector<Segment>& a,
                                        const std::vector<Segment>& b);
std::int64_t total_ms(const std::vector<Segment>& intervals);

// A set of (segment, speaker) entries for one recording: the carrier of
// "who spoke when" for references, hypotheses and SAD output alike.
class Annotation {
 public:
  Annotation() = default;
  explicit Annotation(std::string file_id) : file_id_(std::move(file_id)) {}
  Annotation(std::string file_id, std::vector<LabeledSegment> entries);

  const std::string& file_id() const { return file_id_; }
  void set_file_id(std::string id) { file_id_ = std::move(id); }
  const std::vector<LabeledSegment>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  void add(Segment segment, std::string label);

  // Sorts entries by (start, end, label) and merges same-label entries
  // that overlap or abut (gap < 1 ms). Idempotent.
  void normalize();
  Annotation normalized() const;

  // Sorted unique speaker labels.
  std::vector<std::string> labels() const;
  // Union of all segments, merged.
  std::vector<Segment> support() const;
  // Union of one speaker's segments, merged.
  std::vector<Segment> label_support(const std::string& label) const;
  // Sum of entry durations.
  std::int64_t total_duration_ms() const;
  double total_duration() const;

  bool operator==(const Annotation&) const = default;

 private:
  std::string file_id_;
  std::vector<LabeledSegment> entries_;
};

// Scoring regions for one recording; pairwise disjoint and sorted.
struct Uem {
  std::string file_id;
  std::vector<Segment> regions;

  static Uem from_regions(std::string file_id, std::vector<Segment> regions);
};

// RTTM: "SPEAKER <file-id> <chan> <onset> <dur> <NA> <NA> <speaker> <NA> <NA>".
// '#'-prefixed comment lines allowed. Channel is accepted and ignored.
// Malformed lines raise Error naming the line number.
std::map<std::string, Annotation> parse_rttm(std::istream& in);
void write_rttm(const Annotation& annotation, std::ostream& out);
void write_rttm(const std::map<std::string, Annotation>& annotations,
                std::ostream& out);
std::string rttm_to_string(const Annotation& annotation);

// UEM: "<file-id> <chan> <onset> <offset>".
std::map<std::string, Uem> parse_uem(std::istream& in);
void write_uem(const Uem& uem, std::ostream& out);

// Restricts an annotation to UEM regions: every output segment is the
// intersection of an input segment with a region.
Annotation crop(const Annotation& annotation, const Uem& uem);

// Frame t carries the set of speakers active at time (t + 0.5) * step.
// Empty set means non-speech.
std::vector<std::set<std::string>> to_frame_labels(const Annotation& annotation,
                                                   double step,
                                                   std::size_t num_frames);

}  // namespace diarkit

#endif  // DIARKIT_ANNOT_HPP_
