// Copyright 2026 The a3ct Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef A3CT_ERROR_HPP
#define A3CT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace a3ct {

// Error classes map one-to-one onto the C API status codes.
enum class ErrorCode {
  kInvalidArgument = 1,
  kShapeMismatch = 2,
  kState = 3,
  kNumeric = 4,
  kParse = 5,
  kIo = 6,
  kChecksum = 7,
  kVersion = 8,
  kConfig = 9,
  kMismatch = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace a3ct

#endif  // A3CT_ERROR_HPP
