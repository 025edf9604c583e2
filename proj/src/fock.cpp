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

#include "pvqc/fock.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace pvqc {

namespace {

constexpr int kMaxFactorial = 30;

const std::array<double, kMaxFactorial + 1>& factorial_table() {
  static const auto table = [] {
    std::array<double, kMaxFactorial + 1> t{};
    t[0] = 1.0;
    for (int k = 1; k <= kMaxFactorial; ++k) t[k] = t[k - 1] * k;
    return t;
  }();
  return table;
}

// Product of factorials of the entries, as sqrt for amplitude normalization.
double sqrt_factorial_product(const OccupationVector& s) {
  double prod = 1.0;
  for (int c : s.counts()) prod *= factorial(c);
  return std::sqrt(prod);
}

// Mode indices repeated by occupation: (2,0,1) -> {0,0,2}.
std::vector<int> repeated_modes(const OccupationVector& s) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(s.photons()));
  for (int j = 0; j < s.modes(); ++j)
    for (int c = 0; c < s[j]; ++c) out.push_back(j);
  return out;
}

void enumerate(int m, int remaining, std::vector<int>& prefix,
               std::vector<OccupationVector>& out) {
  const auto pos = static_cast<int>(prefix.size());
  if (pos == m - 1) {
    prefix.push_back(remaining);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    prefix.push_back(v);
    enumerate(m, remaining - v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

double factorial(int k) {
  if (k < 0 || k > kMaxFactorial)
    throw InvalidArgument("factorial: argument outside [0, 30]: " + std::to_string(k));
  return factorial_table()[static_cast<std::size_t>(k)];
}

// ---------------------------------------------------------------------------
// OccupationVector

OccupationVector::OccupationVector(std::vector<int> occ) : occ_(std::move(occ)) {
  for (int c : occ_)
    if (c < 0) throw InvalidArgument("OccupationVector: negative photon count");
}

OccupationVector::OccupationVector(std::initializer_list<int> occ)
    : OccupationVector(std::vector<int>(occ)) {}

int OccupationVector::photons() const { return std::accumulate(occ_.begin(), occ_.end(), 0); }

int OccupationVector::max_occupation() const {
  int best = 0;
  for (int c : occ_) best = std::max(best, c);
  return best;
}

std::string OccupationVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < occ_.size(); ++i) {
    if (i) os << ',';
    os << occ_[i];
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// FockBasis

std::uint64_t sector_dimension(int modes, int photons) {
  if (modes < 0 || photons < 0) throw InvalidArgument("sector_dimension: negative size");
  if (modes == 0) return photons == 0 ? 1 : 0;
  // C(m+n-1, n) built incrementally; every partial product is itself a binomial.
  const std::uint64_t top = static_cast<std::uint64_t>(modes) + static_cast<std::uint64_t>(photons) - 1;
  const auto k = static_cast<std::uint64_t>(std::min<std::uint64_t>(photons, top - static_cast<std::uint64_t>(photons)));
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = top - k + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / factor)
      throw InvalidArgument("sector_dimension: overflow");
    result = result * factor / i;
  }
  return result;
}

FockBasis::FockBasis(int modes, int photons) : m_(modes), n_(photons) {
  if (modes < 1) throw InvalidArgument("FockBasis: need at least one mode");
  if (photons < 0) throw InvalidArgument("FockBasis: negative photon number");
  const std::uint64_t dim = sector_dimension(modes, photons);
  if (dim > std::numeric_limits<std::uint32_t>::max())
    throw InvalidArgument("FockBasis: sector too large to enumerate");
  states_.reserve(static_cast<std::size_t>(dim));
  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(modes));
  enumerate(modes, photons, prefix, states_);
}

std::optional<std::size_t> FockBasis::find(const OccupationVector& s) const {
  if (s.modes() != m_ || s.photons() != n_) return std::nullopt;
  // Rank in decreasing lexicographic order: states whose entry at position i
  // exceeds s_i (with equal prefix) come first; there are dim(m-i, rem-s_i-1)
  // of them by the hockey-stick identity.
  std::uint64_t rank = 0;
  int remaining = n_;
  for (int i = 0; i + 1 < m_; ++i) {
    const int above = remaining - s[i];
    if (above >= 1) rank += sector_dimension(m_ - i, above - 1);
    remaining -= s[i];
  }
  return static_cast<std::size_t>(rank);
}

std::size_t FockBasis::index(const OccupationVector& s) const {
  auto i = find(s);
  if (!i) throw InvalidArgument("FockBasis: state " + s.to_string() + " not in sector");
  return *i;
}

FockBasis enumerate_basis(int modes, int photons) { return FockBasis(modes, photons); }

// ---------------------------------------------------------------------------
// ModeUnitary / SectorOperator

ModeUnitary::ModeUnitary(CMatrix entries, double tol) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw InvalidArgument("ModeUnitary: matrix must be square and non-empty");
  const auto m = entries_.rows();
  const double residual = (entries_.adjoint() * entries_ - CMatrix::Identity(m, m)).norm();
  if (!(residual <= tol))
    throw ValidationError("ModeUnitary: not unitary (residual " + std::to_string(residual) + ")");
}

ModeUnitary ModeUnitary::identity(int modes) {
  return ModeUnitary(CMatrix::Identity(modes, modes));
}

ModeUnitary ModeUnitary::adjoint() const { return ModeUnitary(entries_.adjoint()); }

ModeUnitary ModeUnitary::operator*(const ModeUnitary& rhs) const {
  if (modes() != rhs.modes()) throw InvalidArgument("ModeUnitary: mode count mismatch");
  return ModeUnitary(entries_ * rhs.entries_, 1e-9);
}

SectorOperator::SectorOperator(int modes, int photons, CMatrix entries)
    : m_(modes), n_(photons), entries_(std::move(entries)) {
  const auto dim = sector_dimension(modes, photons);
  if (entries_.rows() != entries_.cols() || static_cast<std::uint64_t>(entries_.rows()) != dim)
    throw InvalidArgument("SectorOperator: matrix is not " + std::to_string(dim) + " x " +
                          std::to_string(dim) + " for sector (m=" + std::to_string(modes) +
                          ", n=" + std::to_string(photons) + ")");
}

SectorOperator SectorOperator::identity(int modes, int photons) {
  const auto d = static_cast<Eigen::Index>(sector_dimension(modes, photons));
  return SectorOperator(modes, photons, CMatrix::Identity(d, d));
}

SectorOperator SectorOperator::zero(int modes, int photons) {
  const auto d = static_cast<Eigen::Index>(sector_dimension(modes, photons));
  return SectorOperator(modes, photons, CMatrix::Zero(d, d));
}

SectorOperator SectorOperator::projector(int modes, int photons, std::size_t index) {
  const auto d = static_cast<Eigen::Index>(sector_dimension(modes, photons));
  if (static_cast<Eigen::Index>(index) >= d) throw InvalidArgument("projector: index out of range");
  CMatrix p = CMatrix::Zero(d, d);
  p(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return SectorOperator(modes, photons, std::move(p));
}

bool SectorOperator::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).norm() <= tol;
}

// ---------------------------------------------------------------------------
// Lifts

Complex transition_amplitude(const ModeUnitary& s, const OccupationVector& in,
                             const OccupationVector& out) {
  if (in.modes() != s.modes() || out.modes() != s.modes())
    throw InvalidArgument("transition_amplitude: occupation length does not match mode count");
  if (in.photons() != out.photons())
    throw InvalidArgument("transition_amplitude: photon number mismatch " + in.to_string() +
                          " -> " + out.to_string());
  const auto rows = repeated_modes(out);
  const auto cols = repeated_modes(in);
  const auto k = static_cast<Eigen::Index>(rows.size());
  CMatrix sub(k, k);
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < k; ++c)
      sub(r, c) = s.matrix()(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
  return permanent(sub) / (sqrt_factorial_product(in) * sqrt_factorial_product(out));
}

SectorOperator lift_unitary(const ModeUnitary& s, const FockBasis& basis) {
  if (s.modes() != basis.modes()) throw InvalidArgument("lift_unitary: mode count mismatch");
  const auto d = static_cast<Eigen::Index>(basis.size());
  const auto k = static_cast<Eigen::Index>(basis.photons());

  std::vector<std::vector<int>> lists;
  std::vector<double> norms;
  lists.reserve(basis.size());
  norms.reserve(basis.size());
  for (const auto& st : basis.states()) {
    lists.push_back(repeated_modes(st));
    norms.push_back(sqrt_factorial_product(st));
  }

  CMatrix out(d, d);
  CMatrix sub(k, k);
  for (Eigen::Index col = 0; col < d; ++col) {
    const auto& cols = lists[static_cast<std::size_t>(col)];
    for (Eigen::Index row = 0; row < d; ++row) {
      const auto& rows = lists[static_cast<std::size_t>(row)];
      for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c)
          sub(r, c) = s.matrix()(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
      out(row, col) = permanent(sub) /
                      (norms[static_cast<std::size_t>(row)] * norms[static_cast<std::size_t>(col)]);
    }
  }
  return SectorOperator(basis.modes(), basis.photons(), std::move(out));
}

Eigen::SparseMatrix<Complex> second_quantize(const CMatrix& h, const FockBasis& basis) {
  const int m = basis.modes();
  if (h.rows() != m || h.cols() != m)
    throw InvalidArgument("second_quantize: generator is not m x m");
  const auto d = static_cast<Eigen::Index>(basis.size());
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(basis.size() * static_cast<std::size_t>(m));

  std::vector<int> work(static_cast<std::size_t>(m));
  for (Eigen::Index col = 0; col < d; ++col) {
    const auto& s = basis[static_cast<std::size_t>(col)];
    for (int k = 0; k < m; ++k) {
      if (s[k] == 0) continue;
      for (int j = 0; j < m; ++j) {
        const Complex hjk = h(j, k);
        if (hjk == Complex(0.0)) continue;
        if (j == k) {
          triplets.emplace_back(col, col, hjk * static_cast<double>(s[k]));
          continue;
        }
        work = s.counts();
        work[static_cast<std::size_t>(k)] -= 1;
        work[static_cast<std::size_t>(j)] += 1;
        const double amp = std::sqrt(static_cast<double>(s[k])) *
                           std::sqrt(static_cast<double>(s[j] + 1));
        const auto row = static_cast<Eigen::Index>(basis.index(OccupationVector(work)));
        triplets.emplace_back(row, col, hjk * amp);
      }
    }
  }
  Eigen::SparseMatrix<Complex> out(d, d);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

SectorOperator lift_generator(const CMatrix& h, const FockBasis& basis) {
  if (h.rows() != h.cols()) throw InvalidArgument("lift_generator: generator is not square");
  if ((h - h.adjoint()).norm() > 1e-10) throw ValidationError("lift_generator: generator is not Hermitian");
  return SectorOperator(basis.modes(), basis.photons(), CMatrix(second_quantize(h, basis)));
}

CVector evolve_state(const ModeUnitary& s, const OccupationVector& input, const FockBasis& basis) {
  if (s.modes() != basis.modes() || input.modes() != basis.modes())
    throw InvalidArgument("evolve_state: mode count mismatch");
  if (input.photons() != basis.photons())
    throw InvalidArgument("evolve_state: input " + input.to_string() + " has " +
                          std::to_string(input.photons()) + " photons, sector has " +
                          std::to_string(basis.photons()));
  return FockLadder(basis.modes(), basis.photons()).evolve(s.matrix(), input);
}

double expectation_value(const ModeUnitary& s, const SectorOperator& rho, const SectorOperator& o) {
  if (!rho.same_sector(o)) throw InvalidArgument("expectation_value: rho and O live in different sectors");
  if (s.modes() != rho.modes()) throw InvalidArgument("expectation_value: mode count mismatch");
  const FockBasis basis(rho.modes(), rho.photons());
  const CMatrix u = lift_unitary(s, basis).matrix();
  const CMatrix evolved = u * rho.matrix() * u.adjoint();
  return (evolved * o.matrix()).trace().real();
}

// ---------------------------------------------------------------------------
// FockLadder

FockLadder::FockLadder(int modes, int photons) : m_(modes), n_(photons) {
  if (modes < 1 || photons < 0) throw InvalidArgument("FockLadder: invalid sector");
  sectors_.reserve(static_cast<std::size_t>(photons) + 1);
  for (int k = 0; k <= photons; ++k) sectors_.emplace_back(modes, k);

  raise_.resize(static_cast<std::size_t>(photons));
  std::vector<int> work(static_cast<std::size_t>(modes));
  for (int k = 0; k < photons; ++k) {
    const auto& lo = sectors_[static_cast<std::size_t>(k)];
    const auto& hi = sectors_[static_cast<std::size_t>(k) + 1];
    auto& table = raise_[static_cast<std::size_t>(k)];
    table.resize(lo.size() * static_cast<std::size_t>(modes));
    for (std::size_t i = 0; i < lo.size(); ++i) {
      work = lo[i].counts();
      for (int a = 0; a < modes; ++a) {
        work[static_cast<std::size_t>(a)] += 1;
        table[i * static_cast<std::size_t>(modes) + static_cast<std::size_t>(a)] =
            static_cast<std::uint32_t>(hi.index(OccupationVector(work)));
        work[static_cast<std::size_t>(a)] -= 1;
      }
    }
  }
}

CVector FockLadder::evolve(const CMatrix& s, const OccupationVector& input) const {
  if (input.modes() != m_ || input.photons() != n_)
    throw InvalidArgument("FockLadder::evolve: input " + input.to_string() + " not in sector");
  if (s.rows() != m_ || s.cols() != m_) throw InvalidArgument("FockLadder::evolve: matrix is not m x m");

  CVector v = CVector::Ones(1);
  int k = 0;
  for (int j = 0; j < m_; ++j) {
    for (int rep = 0; rep < input[j]; ++rep) {
      const auto& lo = sectors_[static_cast<std::size_t>(k)];
      CVector next = CVector::Zero(static_cast<Eigen::Index>(sectors_[static_cast<std::size_t>(k) + 1].size()));
      for (std::size_t i = 0; i < lo.size(); ++i) {
        const Complex vi = v(static_cast<Eigen::Index>(i));
        if (vi == Complex(0.0)) continue;
        const auto& st = lo[i];
        for (int a = 0; a < m_; ++a) {
          const Complex sa = s(a, j);
          next(raised(k, i, a)) += sa * std::sqrt(static_cast<double>(st[a] + 1)) * vi;
        }
      }
      v = std::move(next);
      ++k;
    }
  }
  return v / sqrt_factorial_product(input);
}

CVector FockLadder::lower(const CVector& psi, int mode) const {
  if (n_ == 0) throw InvalidArgument("FockLadder::lower: vacuum sector has nothing to lower");
  const auto& below = sectors_[static_cast<std::size_t>(n_) - 1];
  CVector out(static_cast<Eigen::Index>(below.size()));
  for (std::size_t t = 0; t < below.size(); ++t) {
    out(static_cast<Eigen::Index>(t)) =
        std::sqrt(static_cast<double>(below[t][mode] + 1)) * psi(raised(n_ - 1, t, mode));
  }
  return out;
}

CMatrix FockLadder::one_body_matrix(const CVector& phi, const CVector& psi) const {
  if (n_ == 0) return CMatrix::Zero(m_, m_);
  const auto below = static_cast<Eigen::Index>(sectors_[static_cast<std::size_t>(n_) - 1].size());
  CMatrix lowered_phi(below, m_);
  CMatrix lowered_psi(below, m_);
  for (int j = 0; j < m_; ++j) {
    lowered_phi.col(j) = lower(phi, j);
    lowered_psi.col(j) = lower(psi, j);
  }
  return lowered_phi.adjoint() * lowered_psi;
}

}  // namespace pvqc
