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
#include <random>
#include <string>
#include <string_view>

#include "pvqc/loss.hpp"
#include "pvqc/mesh.hpp"
#include "pvqc/postselect.hpp"

namespace pvqc {

enum class Purpose : std::uint32_t {
  Parameters = 1,
  Target = 2,
  Bootstrap = 3,
  Oracle = 4,
};

/// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t stable_hash(std::string_view text);

/// Independent random stream. Constructed from a key, never advanced by
/// anyone else, so draws do not depend on scheduling.
class Stream {
 public:
  explicit Stream(std::uint64_t seed);
  Stream(std::uint64_t master_seed, std::uint64_t cell_key, std::uint64_t sample_index, Purpose purpose);

  double uniform();  // [0, 1)
  double normal();
  double exponential();
  std::uint64_t below(std::uint64_t bound);  // [0, bound)

 private:
  std::mt19937_64 engine_;
};

struct SeedPolicy {
  std::uint64_t master_seed;

  Stream stream(std::uint64_t cell_key, std::uint64_t sample_index, Purpose purpose) const {
    return Stream(master_seed, cell_key, sample_index, purpose);
  }
};

enum class Initializer { Uniform, Beta, Haar };

Initializer parse_initializer(std::string_view name);
std::string initializer_name(Initializer init);

/// Every parameter i.i.d. Unif[0, 2 pi).
MeshParams init_uniform(int modes, Stream& stream);
/// Every parameter pi * Beta(1/2, 1/2), drawn as pi sin^2(pi U / 2).
MeshParams init_beta(int modes, Stream& stream);
/// Haar-random S, decomposed into mesh parameters.
MeshParams init_haar(int modes, Stream& stream);
MeshParams initialize(Initializer init, int modes, Stream& stream);

/// Ginibre matrix, QR, and phase correction by sign(diag R).
CMatrix haar_unitary(int modes, Stream& stream);

/// Flat Dirichlet over the outcome set (normalized exponentials).
TargetDistribution sample_target(const OutcomeSet& outcomes, Stream& stream);

}  // namespace pvqc
