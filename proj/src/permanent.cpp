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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "pvqc/fock.hpp"

namespace pvqc {

namespace {
constexpr Eigen::Index kMaxRyser = 30;
constexpr Eigen::Index kMaxNaive = 9;
}  // namespace

Complex permanent(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("permanent: matrix is not square");
  const Eigen::Index k = a.rows();
  if (k > kMaxRyser) throw InvalidArgument("permanent: size exceeds 30");
  if (k == 0) return 1.0;
  if (k == 1) return a(0, 0);
  if (k == 2) return a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);

  // Ryser: per(A) = (-1)^k sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij,
  // walking subsets in Gray-code order so each step touches one column.
  std::vector<Complex> row_sums(static_cast<std::size_t>(k), Complex(0.0));
  Complex total(0.0);
  const std::uint64_t subsets = std::uint64_t{1} << k;
  std::uint64_t gray = 0;
  for (std::uint64_t step = 1; step < subsets; ++step) {
    const int col = std::countr_zero(step);
    const std::uint64_t bit = std::uint64_t{1} << col;
    gray ^= bit;
    if (gray & bit) {
      for (Eigen::Index i = 0; i < k; ++i) row_sums[static_cast<std::size_t>(i)] += a(i, col);
    } else {
      for (Eigen::Index i = 0; i < k; ++i) row_sums[static_cast<std::size_t>(i)] -= a(i, col);
    }
    Complex prod = row_sums[0];
    for (Eigen::Index i = 1; i < k; ++i) prod *= row_sums[static_cast<std::size_t>(i)];
    if (std::popcount(gray) & 1) total -= prod;
    else total += prod;
  }
  return (k & 1) ? -total : total;
}

Complex permanent_naive(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("permanent_naive: matrix is not square");
  const Eigen::Index k = a.rows();
  if (k > kMaxNaive) throw InvalidArgument("permanent_naive: size exceeds 9");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Complex total(0.0);
  do {
    Complex term(1.0);
    for (Eigen::Index i = 0; i < k; ++i) term *= a(i, perm[static_cast<std::size_t>(i)]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace pvqc
