// Copyright 2026 The asrfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASRFIX_UTIL_HPP_
#define ASRFIX_UTIL_HPP_

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asrfix {

// Base error for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (JSONL manifest, template, config). Carries the
// offending path and 1-based line number when known (line 0 = whole file).
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, const std::string& message);
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_ = 0;
};

// Structurally valid input that violates a contract (duplicate ids,
// non-contiguous indices, bad template placeholders, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

std::string_view trim(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
std::size_t word_count(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string lowercase_ascii(std::string_view s);

// Replaces every occurrence of `from` (non-empty) in `s`.
std::string replace_all(std::string_view s, std::string_view from,
                        std::string_view to);

// Runs fn(i) for i in [0, n) on up to `threads` worker threads. With
// threads <= 1 it degenerates to a plain loop. The first exception thrown
// by any worker is rethrown on the caller thread after all workers join.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace asrfix

#endif  // ASRFIX_UTIL_HPP_
