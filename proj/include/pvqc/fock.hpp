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

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "pvqc/common.hpp"

namespace pvqc {

/// Photon counts per optical mode.
class OccupationVector {
 public:
  OccupationVector() = default;
  explicit OccupationVector(std::vector<int> occ);
  OccupationVector(std::initializer_list<int> occ);

  int modes() const { return static_cast<int>(occ_.size()); }
  int photons() const;
  int operator[](int mode) const { return occ_[static_cast<std::size_t>(mode)]; }
  const std::vector<int>& counts() const { return occ_; }

  /// Largest count in any single mode.
  int max_occupation() const;

  /// "(1,0,1,0)"
  std::string to_string() const;

  auto operator<=>(const OccupationVector&) const = default;

 private:
  std::vector<int> occ_;
};

/// Number of states with `photons` photons in `modes` modes, C(m+n-1, n).
/// Throws InvalidArgument when the value does not fit in 64 bits.
std::uint64_t sector_dimension(int modes, int photons);

/// The n-photon, m-mode Fock sector in strictly decreasing lexicographic
/// order. Reverse lookup is a combinatorial rank, so no hash table is kept.
class FockBasis {
 public:
  FockBasis(int modes, int photons);

  int modes() const { return m_; }
  int photons() const { return n_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<OccupationVector>& states() const { return states_; }
  const OccupationVector& operator[](std::size_t i) const { return states_[i]; }

  /// Position of `s` in the basis, or nullopt if it belongs to another sector.
  std::optional<std::size_t> find(const OccupationVector& s) const;
  /// Like find(), but throws InvalidArgument for foreign states.
  std::size_t index(const OccupationVector& s) const;

 private:
  int m_;
  int n_;
  std::vector<OccupationVector> states_;
};

FockBasis enumerate_basis(int modes, int photons);

/// A unitary m x m mode transformation.
class ModeUnitary {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Validates S^dagger S = I in Frobenius norm within `tol`.
  explicit ModeUnitary(CMatrix entries, double tol = kTolerance);

  static ModeUnitary identity(int modes);

  int modes() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& matrix() const { return entries_; }
  ModeUnitary adjoint() const;
  ModeUnitary operator*(const ModeUnitary& rhs) const;

 private:
  CMatrix entries_;
};

/// A dense operator on one Fock sector.
class SectorOperator {
 public:
  SectorOperator(int modes, int photons, CMatrix entries);

  static SectorOperator identity(int modes, int photons);
  static SectorOperator zero(int modes, int photons);
  /// |s><s| for the basis state at `index`.
  static SectorOperator projector(int modes, int photons, std::size_t index);

  int modes() const { return m_; }
  int photons() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const CMatrix& matrix() const { return entries_; }

  bool same_sector(const SectorOperator& other) const {
    return m_ == other.m_ && n_ == other.n_;
  }
  bool is_hermitian(double tol) const;

 private:
  int m_;
  int n_;
  CMatrix entries_;
};

/// Permanent by Ryser's formula with Gray-code subset updates, O(k 2^k).
Complex permanent(const CMatrix& a);
/// Permanent as an explicit sum over permutations. Oracle only, k <= 9.
Complex permanent_naive(const CMatrix& a);

/// <t| pi(S) |s>: Per(S[t|s]) / sqrt(prod t_i! prod s_j!), rows of S repeated
/// t_i times and columns s_j times.
Complex transition_amplitude(const ModeUnitary& s, const OccupationVector& in,
                             const OccupationVector& out);

SectorOperator lift_unitary(const ModeUnitary& s, const FockBasis& basis);

/// Second quantization sum_jk H_jk a_j^dagger a_k of an arbitrary complex
/// mode matrix, as a sparse D x D matrix. No Hermiticity requirement.
Eigen::SparseMatrix<Complex> second_quantize(const CMatrix& h, const FockBasis& basis);

/// d pi(H) for Hermitian H.
SectorOperator lift_generator(const CMatrix& h, const FockBasis& basis);

/// Column of pi(S) at `input`, amplitudes over `basis`.
CVector evolve_state(const ModeUnitary& s, const OccupationVector& input,
                     const FockBasis& basis);

/// Tr[pi(S) rho pi(S)^dagger O].
double expectation_value(const ModeUnitary& s, const SectorOperator& rho,
                         const SectorOperator& o);

/// Bases for sectors 0..n on m modes plus the creation tables between
/// adjacent sectors. Built once per (m, n) and shared read-only; every
/// method is const and allocates its own scratch.
class FockLadder {
 public:
  FockLadder(int modes, int photons);

  int modes() const { return m_; }
  int photons() const { return n_; }
  const FockBasis& sector(int photons) const { return sectors_[static_cast<std::size_t>(photons)]; }
  const FockBasis& top() const { return sectors_.back(); }

  /// Index in sector k+1 of state `i` of sector k with one photon added to `mode`.
  std::uint32_t raised(int k, std::size_t i, int mode) const {
    return raise_[static_cast<std::size_t>(k)][i * static_cast<std::size_t>(m_) + static_cast<std::size_t>(mode)];
  }

  /// pi(S)|input> by applying prod_j (sum_i S_ij a_i^dagger) to the vacuum.
  CVector evolve(const CMatrix& s, const OccupationVector& input) const;

  /// a_mode |psi> for psi in the top sector; result lives in sector n-1.
  CVector lower(const CVector& psi, int mode) const;

  /// M_jl = <phi| a_j^dagger a_l |psi> for phi, psi in the top sector.
  CMatrix one_body_matrix(const CVector& phi, const CVector& psi) const;

 private:
  int m_;
  int n_;
  std::vector<FockBasis> sectors_;
  std::vector<std::vector<std::uint32_t>> raise_;
};

/// Floating-point factorial, exact in double for k <= 22 and within
/// rounding up to the supported limit k <= 30.
double factorial(int k);

}  // namespace pvqc
