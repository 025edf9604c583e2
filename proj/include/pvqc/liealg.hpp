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
#include "pvqc/postselect.hpp"

namespace pvqc {

enum class Algebra { U, SU };

Algebra parse_algebra(std::string_view name);
std::string algebra_name(Algebra which);

/// Hermitian basis of i u(m) or i su(m) at the single-photon level.
struct GeneratorBasis {
  int modes;
  Algebra which;
  std::vector<CMatrix> elements;
};

/// Generalized Gell-Mann matrices: for each j < k a symmetric and an
/// antisymmetric off-diagonal pair, then m-1 traceless diagonals, then
/// the identity when `which` is U. Normalized to Tr[B_a B_b] = 2 delta_ab
/// (identity excepted); m = 2 gives X, Y, Z.
GeneratorBasis generator_basis(int modes, Algebra which);

/// G_ab = Tr[(H_a^eff)^dagger H_b^eff] with H^eff the restriction of each
/// operator to the retained indices.
RMatrix gram_matrix(const std::vector<SectorOperator>& lifted, const OutcomeSet& retained);

struct GPurityReport {
  std::string regime;
  int modes;
  int photons;
  double purity;
  std::size_t subspace_dim;
};

/// Squared norm of the projection of K^dagger O K onto the span of the
/// lifted generators, v^T G^{-1} v, with v_a = Tr[(H_a^eff)^dagger O_eff]
/// over the retained block and G the Gram matrix of the lifted generators
/// on the whole sector. Throws DegenerateRestrictionError when G has
/// condition number above 1e12.
GPurityReport g_purity(const SectorOperator& o, const PostselectionRegime& regime,
                       const FockBasis& basis, Algebra which);
GPurityReport g_purity(const SectorOperator& o, const PostselectionRegime& regime,
                       const FockBasis& basis, const GeneratorBasis& generators);

/// P_su(rho) P_su(O) / (m^2 - 1). Only meaningful when O or rho lies in the
/// lifted algebra; that condition is not checked.
double predicted_variance(const SectorOperator& rho, const SectorOperator& o, int modes);

/// Observables offered for purity reports.
enum class ReferenceObservable {
  ModeNumber,    // "number0": photon number in mode 0
  FirstOutcome,  // "first_outcome": |x><x| for the first retained outcome
  Success,       // "success": identity, so the report shows K^dagger K
};

ReferenceObservable parse_reference_observable(std::string_view name);
std::string reference_observable_name(ReferenceObservable kind);

/// The chosen reference observable, already pulled back through the regime.
SectorOperator reference_observable(ReferenceObservable kind, const PostselectionRegime& regime,
                                    const FockBasis& basis);

}  // namespace pvqc
