// Copyright 2026 The pvqc Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pvqc/harness.hpp"
#include "pvqc/liealg.hpp"

namespace pvqc {

/// Flat `key = value` text. `#` starts a comment; list values are
/// comma-separated. Every entry remembers where it came from so that
/// validation errors can point at it.
class KeyValues {
 public:
  static KeyValues parse(std::istream& in, const std::string& source);
  static KeyValues parse_file(const std::string& path);

  /// Applies a `key=value` override, replacing any earlier value.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value, const std::string& origin);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  /// Throws ConfigError naming the first key not in `allowed`.
  void reject_unknown(const std::set<std::string>& allowed) const;

  std::string get_string(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::uint64_t get_uint64(const std::string& key) const;
  double get_double(const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    std::string origin;  // "file:line" or "--set"
  };
  const Entry& at(const std::string& key) const;
  std::map<std::string, Entry> entries_;
};

SweepConfig sweep_config_from(const KeyValues& kv);
std::string render_sweep_config(const SweepConfig& config);

struct PurityConfig {
  std::vector<PostselectionRegime> regimes;
  std::vector<int> modes;
  std::vector<int> photons;  // empty: n = m / 2 for each m
  ReferenceObservable observable = ReferenceObservable::FirstOutcome;
  Algebra algebra = Algebra::U;
  std::string output;  // empty: standard output
};

PurityConfig purity_config_from(const KeyValues& kv);
std::string render_purity_config(const PurityConfig& config);

struct GradcheckConfig {
  int cases = 30;
  std::uint64_t seed = 0;
  GradcheckSettings settings;
};

GradcheckConfig gradcheck_config_from(const KeyValues& kv);
std::string render_gradcheck_config(const GradcheckConfig& config);

}  // namespace pvqc
