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

#ifndef DIARKIT_ERROR_HPP_
#define DIARKIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace diarkit {

// Thrown for invalid inputs and violated preconditions throughout the
// library. The CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace diarkit

#endif  // DIARKIT_ERROR_HPP_
