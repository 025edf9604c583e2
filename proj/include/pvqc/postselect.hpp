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

#include <string>
#include <string_view>
#include <vector>

#include "pvqc/fock.hpp"

namespace pvqc {

enum class RegimeKind { AllowBunching, CollisionFree, RailCode };

/// Restriction of the detected outcome space. Retained sets are always
/// derived from (regime, basis); nothing is cached here.
class PostselectionRegime {
 public:
  static PostselectionRegime allow_bunching() { return PostselectionRegime(RegimeKind::AllowBunching, 0); }
  static PostselectionRegime collision_free() { return PostselectionRegime(RegimeKind::CollisionFree, 0); }
  /// One photon per block of `rails` consecutive modes.
  static PostselectionRegime rail_code(int rails);

  /// "fock", "unbunched", "dual_rail", "rail3" (or "railR" for R >= 2).
  static PostselectionRegime parse(std::string_view name);

  RegimeKind kind() const { return kind_; }
  int rails() const { return rails_; }
  std::string name() const;

  /// Throws ConfigError if the regime cannot be applied to (m, n).
  void validate(int modes, int photons) const;
  /// Logical units N = m / r for rail codes.
  int logical_units(int modes) const;

  bool operator==(const PostselectionRegime&) const = default;

 private:
  PostselectionRegime(RegimeKind kind, int rails) : kind_(kind), rails_(rails) {}
  RegimeKind kind_;
  int rails_;
};

struct OutcomeSet {
  std::vector<std::size_t> retained;  // ascending basis indices
  std::vector<std::string> labels;

  std::size_t size() const { return retained.size(); }
};

OutcomeSet retained_indices(const PostselectionRegime& regime, const FockBasis& basis);

/// Digit b is the rail (0-based) holding the photon of block b.
std::string logical_label(const OccupationVector& s, int rails);

/// K^dagger K: diagonal projector onto the retained outcomes.
SectorOperator success_observable(const PostselectionRegime& regime, const FockBasis& basis);

/// K^dagger O K: O with rows and columns outside the retained set zeroed.
SectorOperator pulled_back_observable(const PostselectionRegime& regime, const SectorOperator& o,
                                      const FockBasis& basis);

/// Default input state: rail 0 of every block for rail codes (the logical
/// zero), photons in modes 0..n-1 otherwise.
OccupationVector default_input(const PostselectionRegime& regime, int modes, int photons);

}  // namespace pvqc
