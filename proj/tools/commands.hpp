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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pvqc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Each command returns its exit code. Library and config errors propagate
// as exceptions and are mapped to kExitUsage by main.

int cmd_basis(int modes, int photons, std::size_t list_limit, std::ostream& out);
int cmd_hom(std::ostream& out);

struct ConfigSource {
  std::string path;                 // empty: no file
  std::vector<std::string> overrides;  // key=value
};

int cmd_purity(const ConfigSource& src, std::ostream& out);
int cmd_sweep(const ConfigSource& src, std::optional<int> workers, std::ostream& out);
int cmd_fit(const std::string& results_path, const std::vector<std::string>& models, const std::string& output,
            std::ostream& out);
int cmd_gradcheck(const ConfigSource& src, std::ostream& out);

}  // namespace pvqc::cli
