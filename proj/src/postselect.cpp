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

#include "pvqc/postselect.hpp"

#include <charconv>

namespace pvqc {

namespace {

bool is_code_state(const OccupationVector& s, int rails) {
  if (rails < 2 || s.modes() % rails != 0) return false;
  for (int b = 0; b < s.modes() / rails; ++b) {
    int count = 0;
    for (int r = 0; r < rails; ++r) count += s[b * rails + r];
    if (count != 1) return false;
  }
  return true;
}

bool retains(const PostselectionRegime& regime, const OccupationVector& s) {
  switch (regime.kind()) {
    case RegimeKind::AllowBunching: return true;
    case RegimeKind::CollisionFree: return s.max_occupation() <= 1;
    case RegimeKind::RailCode: return is_code_state(s, regime.rails());
  }
  return false;
}

}  // namespace

PostselectionRegime PostselectionRegime::rail_code(int rails) {
  if (rails < 2) throw ConfigError("rail code needs at least two rails per block, got " + std::to_string(rails));
  return PostselectionRegime(RegimeKind::RailCode, rails);
}

PostselectionRegime PostselectionRegime::parse(std::string_view name) {
  if (name == "fock") return allow_bunching();
  if (name == "unbunched") return collision_free();
  if (name == "dual_rail") return rail_code(2);
  if (name.starts_with("rail") && name.size() > 4) {
    int rails = 0;
    const auto digits = name.substr(4);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), rails);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && rails >= 2) return rail_code(rails);
  }
  throw ConfigError("unknown postselection regime '" + std::string(name) +
                    "' (expected fock, unbunched, dual_rail or rail3)");
}

std::string PostselectionRegime::name() const {
  switch (kind_) {
    case RegimeKind::AllowBunching: return "fock";
    case RegimeKind::CollisionFree: return "unbunched";
    case RegimeKind::RailCode: return rails_ == 2 ? "dual_rail" : "rail" + std::to_string(rails_);
  }
  return "";
}

void PostselectionRegime::validate(int modes, int photons) const {
  if (modes < 1 || photons < 0) throw ConfigError("invalid sector (m=" + std::to_string(modes) + ", n=" + std::to_string(photons) + ")");
  switch (kind_) {
    case RegimeKind::AllowBunching: return;
    case RegimeKind::CollisionFree:
      if (photons > modes)
        throw ConfigError("unbunched: " + std::to_string(photons) + " photons cannot be collision-free in " +
                          std::to_string(modes) + " modes");
      return;
    case RegimeKind::RailCode:
      if (modes % rails_ != 0)
        throw ConfigError(name() + ": " + std::to_string(rails_) + " rails do not divide m=" + std::to_string(modes));
      if (photons != modes / rails_)
        throw ConfigError(name() + ": need n = m/r = " + std::to_string(modes / rails_) + " photons, got " +
                          std::to_string(photons));
      return;
  }
}

int PostselectionRegime::logical_units(int modes) const {
  if (kind_ != RegimeKind::RailCode) throw ConfigError(name() + " has no logical units");
  return modes / rails_;
}

OutcomeSet retained_indices(const PostselectionRegime& regime, const FockBasis& basis) {
  regime.validate(basis.modes(), basis.photons());
  OutcomeSet out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& s = basis[i];
    if (!retains(regime, s)) continue;
    out.retained.push_back(i);
    out.labels.push_back(regime.kind() == RegimeKind::RailCode ? logical_label(s, regime.rails())
                                                               : s.to_string());
  }
  return out;
}

std::string logical_label(const OccupationVector& s, int rails) {
  if (!is_code_state(s, rails))
    throw InvalidArgument("logical_label: " + s.to_string() + " is not a valid " + std::to_string(rails) +
                          "-rail code state");
  std::string out;
  for (int b = 0; b < s.modes() / rails; ++b)
    for (int r = 0; r < rails; ++r)
      if (s[b * rails + r] == 1) out.push_back(static_cast<char>('0' + r));
  return out;
}

SectorOperator success_observable(const PostselectionRegime& regime, const FockBasis& basis) {
  const auto outcomes = retained_indices(regime, basis);
  const auto d = static_cast<Eigen::Index>(basis.size());
  CMatrix k = CMatrix::Zero(d, d);
  for (auto i : outcomes.retained) k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return SectorOperator(basis.modes(), basis.photons(), std::move(k));
}

SectorOperator pulled_back_observable(const PostselectionRegime& regime, const SectorOperator& o,
                                      const FockBasis& basis) {
  if (o.modes() != basis.modes() || o.photons() != basis.photons())
    throw InvalidArgument("pulled_back_observable: observable and basis are in different sectors");
  const auto outcomes = retained_indices(regime, basis);
  std::vector<bool> keep(basis.size(), false);
  for (auto i : outcomes.retained) keep[i] = true;
  CMatrix out = o.matrix();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    if (keep[static_cast<std::size_t>(i)]) continue;
    out.row(i).setZero();
    out.col(i).setZero();
  }
  return SectorOperator(o.modes(), o.photons(), std::move(out));
}

OccupationVector default_input(const PostselectionRegime& regime, int modes, int photons) {
  regime.validate(modes, photons);
  std::vector<int> occ(static_cast<std::size_t>(modes), 0);
  if (regime.kind() == RegimeKind::RailCode) {
    for (int b = 0; b < photons; ++b) occ[static_cast<std::size_t>(b * regime.rails())] = 1;
  } else {
    if (photons > modes)
      throw ConfigError("default input: cannot place " + std::to_string(photons) + " single photons in " +
                        std::to_string(modes) + " modes");
    for (int j = 0; j < photons; ++j) occ[static_cast<std::size_t>(j)] = 1;
  }
  return OccupationVector(std::move(occ));
}

}  // namespace pvqc
