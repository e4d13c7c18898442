// Copyright 2026 The ladder360 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LADDER360_ERROR_HPP
#define LADDER360_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ladder360 {

// Validation errors are caller mistakes (bad geometry, malformed files,
// inconsistent records). Runtime errors come from the environment (I/O,
// encoder subprocesses). The CLI maps them to exit codes 1 and 2.
enum class ErrorKind { kValidation, kRuntime };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_validation(const std::string& what) {
  throw Error(ErrorKind::kValidation, what);
}

[[noreturn]] inline void throw_runtime(const std::string& what) {
  throw Error(ErrorKind::kRuntime, what);
}

}  // namespace ladder360

#endif  // LADDER360_ERROR_HPP
