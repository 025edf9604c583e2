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

// Shared helpers and independent oracles for the unit tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pvqc/common.hpp"
#include "pvqc/ensembles.hpp"
#include "pvqc/fock.hpp"

namespace pvqc::testing {

inline CMatrix random_complex(int rows, int cols, Stream& rng) {
  CMatrix a(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) a(r, c) = Complex(rng.normal(), rng.normal());
  return a;
}

inline CMatrix random_hermitian(int m, Stream& rng) {
  const CMatrix a = random_complex(m, m, rng);
  return 0.5 * (a + a.adjoint());
}

/// exp(i t H) for Hermitian H by eigendecomposition.
inline CMatrix exp_i(const CMatrix& h, double t) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  const CVector phases = (Complex(0.0, t) * eig.eigenvalues().cast<Complex>()).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// Normalized symmetric tensor for occupation s in (C^m)^{(x)n}, built
/// from first-quantized product states. Used as an oracle independent of
/// the permanent and ladder routes.
inline CVector symmetric_tensor(const OccupationVector& s) {
  const int m = s.modes();
  const int n = s.photons();
  std::vector<int> modes;
  for (int j = 0; j < m; ++j)
    for (int c = 0; c < s[j]; ++c) modes.push_back(j);
  std::size_t size = 1;
  for (int i = 0; i < n; ++i) size *= static_cast<std::size_t>(m);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(size));
  std::sort(modes.begin(), modes.end());
  do {
    std::size_t idx = 0;
    for (int j : modes) idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(j);
    v(static_cast<Eigen::Index>(idx)) += 1.0;
  } while (std::next_permutation(modes.begin(), modes.end()));
  return v / v.norm();
}

/// (S (x) ... (x) S) v for v in (C^m)^{(x)n}, one tensor factor at a time.
inline CVector apply_tensor_power(const CMatrix& s, const CVector& v, int n) {
  const auto m = s.rows();
  CVector cur = v;
  Eigen::Index inner = 1;
  for (int f = 0; f < n; ++f) {
    // Factor f (counted from the last index) has stride `inner`.
    CVector next = CVector::Zero(cur.size());
    const Eigen::Index block = inner * m;
    for (Eigen::Index base = 0; base < cur.size(); base += block)
      for (Eigen::Index low = 0; low < inner; ++low)
        for (Eigen::Index r = 0; r < m; ++r)
          for (Eigen::Index c = 0; c < m; ++c) next(base + r * inner + low) += s(r, c) * cur(base + c * inner + low);
    cur = std::move(next);
    inner = block;
  }
  return cur;
}

/// <t| pi(S) |s> through the tensor-product oracle.
inline Complex tensor_amplitude(const CMatrix& s, const OccupationVector& in, const OccupationVector& out) {
  return symmetric_tensor(out).dot(apply_tensor_power(s, symmetric_tensor(in), in.photons()));
}

inline double max_abs(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace pvqc::testing
