// Copyright 2026 The seqmi Authors
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

#ifndef SEQMI_CONFIG_HPP_
#define SEQMI_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace seqmi {

// Flat key-value configuration with INI-style sections. Keys are addressed as
// "section.key". Lines starting with '#' or ';' are comments. Values read by
// any getter are tracked so unknown keys can be rejected after resolution.
class KvConfig {
 public:
  KvConfig() = default;
  static KvConfig parse(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated list of doubles.
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key,
                                       const std::vector<std::string>& fallback) const;

  // Keys present in the config that no getter has touched.
  std::vector<std::string> untouched_keys() const;

  // Canonical "key = value" dump, sorted by key.
  std::string resolved_text() const;
  // FNV-1a hash of the canonical dump, as 16 hex digits.
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> touched_;
};

}  // namespace seqmi

#endif  // SEQMI_CONFIG_HPP_
