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

#include "diarkit/annot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "diarkit/error.hpp"

namespace diarkit {

namespace {

double parse_double_field(const std::string& field, int line_no,
                          const char* what) {
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0' || !std::isfinite(value)) {
    throw Error("line " + std::to_string(line_no) + ": bad " + what + " '" +
                field + "'");
  }
  return value;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::istringstream iss(line);
  std::vector<std::string> fields;
  std::string tok;
  while (iss >> tok) fields.push_back(tok);
  return fields;
}

bool is_comment_or_blank(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

void append_seconds3(std::string& out, double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  out += buf;
}

}  // namespace

std::int64_t to_ms(double seconds) {
  if (!std::isfinite(seconds)) throw Error("non-finite time value");
  return std::llround(seconds * 1000.0);
}

Segment Segment::from_seconds(double start, double end) {
  if (!std::isfinite(start) || !std::isfinite(end)) {
    throw Error("segment times must be finite");
  }
  return from_ms(to_ms(start), to_ms(end));
}

Segment Segment::from_ms(std::int64_t start, std::int64_t end) {
  if (start < 0) {
    throw Error("segment start must be non-negative, got " +
                std::to_string(start) + " ms");
  }
  if (end <= start) {
    throw Error("segment must have positive duration, got [" +
                std::to_string(start) + ", " + std::to_string(end) + ") ms");
  }
  return Segment{start, end};
}

std::vector<Segment> merge_intervals(std::vector<Segment> intervals) {
  if (intervals.empty()) return intervals;
  std::sort(intervals.begin(), intervals.end());
  std::vector<Segment> merged;
  merged.push_back(intervals.front());
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].start_ms <= merged.back().end_ms) {
      merged.back().end_ms = std::max(merged.back().end_ms,
                                      intervals[i].end_ms);
    } else {
      merged.push_back(intervals[i]);
    }
  }
  return merged;
}

std::vector<Segment> intersect_intervals(const std::vector<Segment>& a,
                                         const std::vector<Segment>& b) {
  const auto sa = merge_intervals(a);
  const auto sb = merge_intervals(b);
  std::vector<Segment> out;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const std::int64_t lo = std::max(sa[i].start_ms, sb[j].start_ms);
    const std::int64_t hi = std::min(sa[i].end_ms, sb[j].end_ms);
    if (lo < hi) out.push_back(Segment{lo, hi});
    if (sa[i].end_ms < sb[j].end_ms) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

std::vector<Segment> subtract_intervals(const std::vector<Segment>& a,
                                        const std::vector<Segment>& b) {
  const auto sa = merge_intervals(a);
  const auto sb = merge_intervals(b);
  std::vector<Segment> out;
  for (const Segment& seg : sa) {
    std::int64_t cursor = seg.start_ms;
    for (const Segment& cut : sb) {
      if (cut.end_ms <= cursor) continue;
      if (cut.start_ms >= seg.end_ms) break;
      if (cut.start_ms > cursor) {
        out.push_back(Segment{cursor, std::min(cut.start_ms, seg.end_ms)});
      }
      cursor = std::max(cursor, cut.end_ms);
      if (cursor >= seg.end_ms) break;
    }
    if (cursor < seg.end_ms) out.push_back(Segment{cursor, seg.end_ms});
  }
  return out;
}

std::int64_t total_ms(const std::vector<Segment>& intervals) {
  std::int64_t total = 0;
  for (const Segment& seg : intervals) total += seg.duration_ms();
  return total;
}

Annotation::Annotation(std::string file_id, std::vector<LabeledSegment> entries)
    : file_id_(std::move(file_id)), entries_(std::move(entries)) {
  normalize();
}

void Annotation::add(Segment segment, std::string label) {
  entries_.push_back(LabeledSegment{segment, std::move(label)});
}

void Annotation::normalize() {
  if (entries_.empty()) return;
  std::sort(entries_.begin(), entries_.end(),
            [](const LabeledSegment& a, const LabeledSegment& b) {
              return std::tie(a.label, a.segment.start_ms, a.segment.end_ms) <
                     std::tie(b.label, b.segment.start_ms, b.segment.end_ms);
            });
  // Merge same-label runs that overlap or abut (gap < 1 ms, which on the
  // integer millisecond grid means gap <= 0).
  std::vector<LabeledSegment> merged;
  merged.push_back(entries_.front());
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    LabeledSegment& back = merged.back();
    const LabeledSegment& cur = entries_[i];
    if (cur.label == back.label &&
        cur.segment.start_ms <= back.segment.end_ms) {
      back.segment.end_ms = std::max(back.segment.end_ms, cur.segment.end_ms);
    } else {
      merged.push_back(cur);
    }
  }
  std::sort(merged.begin(), merged.end(),
            [](const LabeledSegment& a, const LabeledSegment& b) {
              return std::tie(a.segment.start_ms, a.segment.end_ms, a.label) <
                     std::tie(b.segment.start_ms, b.segment.end_ms, b.label);
            });
  entries_ = std::move(merged);
}

Annotation Annotation::normalized() const {
  Annotation copy = *this;
  copy.normalize();
  return copy;
}

std::vector<std::string> Annotation::labels() const {
  std::set<std::string> unique;
  for (const auto& entry : entries_) unique.insert(entry.label);
  return {unique.begin(), unique.end()};
}

std::vector<Segment> Annotation::support() const {
  std::vector<Segment> all;
  all.reserve(entries_.size());
  for (const auto& entry : entries_) all.push_back(entry.segment);
  return merge_intervals(std::move(all));
}

std::vector<Segment> Annotation::label_support(const std::string& label) const {
  std::vector<Segment> own;
  for (const auto& entry : entries_) {
    if (entry.label == label) own.push_back(entry.segment);
  }
  return merge_intervals(std::move(own));
}

std::int64_t Annotation::total_duration_ms() const {
  std::int64_t total = 0;
  for (const auto& entry : entries_) total += entry.segment.duration_ms();
  return total;
}

double Annotation::total_duration() const {
  return static_cast<double>(total_duration_ms()) / 1000.0;
}

Uem Uem::from_regions(std::string file_id, std::vector<Segment> regions) {
  return Uem{std::move(file_id), merge_intervals(std::move(regions))};
}

std::map<std::string, Annotation> parse_rttm(std::istream& in) {
  std::map<std::string, Annotation> result;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() < 9) {
      throw Error("RTTM line " + std::to_string(line_no) +
                  ": expected at least 9 fields, got " +
                  std::to_string(fields.size()));
    }
    if (fields[0] != "SPEAKER") {
      throw Error("RTTM line " + std::to_string(line_no) +
                  ": unsupported record type '" + fields[0] + "'");
    }
    const std::string& file_id = fields[1];
    double onset = 0.0, duration = 0.0;
    try {
      onset = parse_double_field(fields[3], line_no, "onset");
      duration = parse_double_field(fields[4], line_no, "duration");
    } catch (const Error& e) {
      throw Error("RTTM " + std::string(e.what()));
    }
    if (duration <= 0.0) {
      throw Error("RTTM line " + std::to_string(line_no) +
                  ": non-positive duration " + fields[4]);
    }
    if (onset < 0.0) {
      throw Error("RTTM line " + std::to_string(line_no) +
                  ": negative onset " + fields[3]);
    }
    Segment seg;
    try {
      seg = Segment::from_seconds(onset, onset + duration);
    } catch (const Error& e) {
      throw Error("RTTM line " + std::to_string(line_no) + ": " + e.what());
    }
    auto [it, inserted] = result.try_emplace(file_id, file_id);
    it->second.add(seg, fields[7]);
  }
  for (auto& [_, annotation] : result) annotation.normalize();
  return result;
}

void write_rttm(const Annotation& annotation, std::ostream& out) {
  for (const auto& entry : annotation.entries()) {
    std::string line = "SPEAKER " + annotation.file_id() + " 1 ";
    append_seconds3(line, entry.segment.start());
    line += ' ';
    append_seconds3(line, entry.segment.duration());
    line += " <NA> <NA> " + entry.label + " <NA> <NA>\n";
    out << line;
  }
}

void write_rttm(const std::map<std::string, Annotation>& annotations,
                std::ostream& out) {
  for (const auto& [_, annotation] : annotations) write_rttm(annotation, out);
}

std::string rttm_to_string(const Annotation& annotation) {
  std::ostringstream oss;
  write_rttm(annotation, oss);
  return oss.str();
}

std::map<std::string, Uem> parse_uem(std::istream& in) {
  std::map<std::string, std::vector<Segment>> regions;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() < 4) {
      throw Error("UEM line " + std::to_string(line_no) +
                  ": expected 4 fields, got " + std::to_string(fields.size()));
    }
    double onset = 0.0, offset = 0.0;
    try {
      onset = parse_double_field(fields[2], line_no, "onset");
      offset = parse_double_field(fields[3], line_no, "offset");
    } catch (const Error& e) {
      throw Error("UEM " + std::string(e.what()));
    }
    try {
      regions[fields[0]].push_back(Segment::from_seconds(onset, offset));
    } catch (const Error& e) {
      throw Error("UEM line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::map<std::string, Uem> result;
  for (auto& [file_id, segs] : regions) {
    result.emplace(file_id, Uem::from_regions(file_id, std::move(segs)));
  }
  return result;
}

void write_uem(const Uem& uem, std::ostream& out) {
  for (const Segment& region : uem.regions) {
    std::string line = uem.file_id + " 1 ";
    append_seconds3(line, region.start());
    line += ' ';
    append_seconds3(line, region.end());
    line += '\n';
    out << line;
  }
}

Annotation crop(const Annotation& annotation, const Uem& uem) {
  Annotation out(annotation.file_id());
  for (const auto& entry : annotation.entries()) {
    for (const Segment& region : uem.regions) {
      const std::int64_t lo = std::max(entry.segment.start_ms, region.start_ms);
      const std::int64_t hi = std::min(entry.segment.end_ms, region.end_ms);
      if (lo < hi) out.add(Segment{lo, hi}, entry.label);
    }
  }
  out.normalize();
  return out;
}

std::vector<std::set<std::string>> to_frame_labels(const Annotation& annotation,
                                                   double step,
                                                   std::size_t num_frames) {
  if (!(step > 0.0)) throw Error("frame step must be positive");
  std::vector<std::set<std::string>> frames(num_frames);
  for (const auto& entry : annotation.entries()) {
    // Frame centers at (t + 0.5) * step; start one frame early to be safe
    // against rounding of the center time.
    const auto first =
        static_cast<std::int64_t>(std::floor(entry.segment.start() / step)) - 1;
    for (std::int64_t t = std::max<std::int64_t>(0, first);
         t < static_cast<std::int64_t>(num_frames); ++t) {
      const std::int64_t mid_ms = to_ms((static_cast<double>(t) + 0.5) * step);
      if (mid_ms >= entry.segment.end_ms) break;
      if (mid_ms >= entry.segment.start_ms) {
        frames[static_cast<std::size_t>(t)].insert(entry.label);
      }
    }
  }
  return frames;
}

}  // namespace diarkit
