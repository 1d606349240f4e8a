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

#include "asrfix/jsonl.hpp"

#include <fstream>

#include "asrfix/util.hpp"

namespace asrfix {

void for_each_jsonl(const std::string& path,
                    const std::function<void(std::size_t,
                                             const nlohmann::json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path, line_no, std::string("bad JSON: ") + e.what());
    }
    if (!obj.is_object()) {
      throw ParseError(path, line_no, "expected a JSON object");
    }
    fn(line_no, obj);
  }
}

std::string require_string(const nlohmann::json& obj, const char* key,
                           const std::string& path, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(path, line,
                     std::string("missing or non-string field \"") + key + "\"");
  }
  return it->get<std::string>();
}

long require_int(const nlohmann::json& obj, const char* key,
                 const std::string& path, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw ParseError(path, line,
                     std::string("missing or non-integer field \"") + key + "\"");
  }
  return it->get<long>();
}

}  // namespace asrfix
