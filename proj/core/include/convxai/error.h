// Copyright 2026 The ConvXAI Authors.
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

#ifndef CONVXAI_ERROR_H_
#define CONVXAI_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace convxai {

// Base class for every error raised by the library. `code()` is a short
// stable identifier surfaced to users as a diagnostic code.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Malformed input file. The message carries file and line context.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("E_PARSE", message) {}
};

// One or more contract violations, all reported at once.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  ValidationError(std::string code, std::vector<std::string> problems);

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// A caller broke an operation precondition.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message)
      : Error("E_PRECONDITION", message) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& message)
      : Error("E_NOT_FOUND", message) {}
};

// A numerical routine could not produce a result, e.g. a singular system.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message)
      : Error("E_NUMERIC", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("E_IO", message) {}
};

}  // namespace convxai

#endif  // CONVXAI_ERROR_H_
