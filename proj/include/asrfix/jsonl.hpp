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

#ifndef ASRFIX_JSONL_HPP_
#define ASRFIX_JSONL_HPP_

#include <functional>
#include <string>

#include <json.hpp>

namespace asrfix {

// Streams one parsed object per non-blank line. Parse failures raise
// ParseError with the 1-based line number.
void for_each_jsonl(const std::string& path,
                    const std::function<void(std::size_t line_no,
                                             const nlohmann::json&)>& fn);

// Field accessors that turn missing/mistyped fields into ParseError.
std::string require_string(const nlohmann::json& obj, const char* key,
                           const std::string& path, std::size_t line);
long require_int(const nlohmann::json& obj, const char* key,
                 const std::string& path, std::size_t line);

}  // namespace asrfix

#endif  // ASRFIX_JSONL_HPP_
