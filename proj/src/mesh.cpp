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

#include "pvqc/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pvqc {

namespace {

// Entries below this magnitude are treated as already nulled.
constexpr double kNullTolerance = 1e-14;

double wrap_two_pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Eigen::Matrix2cd mzi_block(double theta, double phi) {
  const double c = std::cos(theta), s = std::sin(theta);
  const Complex e = std::polar(1.0, phi);
  Eigen::Matrix2cd t;
  t << e * c, -s, e * s, c;
  return t;
}

Eigen::Matrix2cd mzi_block_dtheta(double theta, double phi) {
  const double c = std::cos(theta), s = std::sin(theta);
  const Complex e = std::polar(1.0, phi);
  Eigen::Matrix2cd t;
  t << -e * s, -c, e * c, -s;
  return t;
}

Eigen::Matrix2cd mzi_block_dphi(double theta, double phi) {
  const double c = std::cos(theta), s = std::sin(theta);
  const Complex ie = Complex(0.0, 1.0) * std::polar(1.0, phi);
  Eigen::Matrix2cd t;
  t << ie * c, 0.0, ie * s, 0.0;
  return t;
}

// x <- B x on rows (j, j+1).
void apply_rows(CMatrix& x, int j, const Eigen::Matrix2cd& b) {
  const CMatrix upper = x.row(j);
  const CMatrix lower = x.row(j + 1);
  x.row(j) = b(0, 0) * upper + b(0, 1) * lower;
  x.row(j + 1) = b(1, 0) * upper + b(1, 1) * lower;
}

// x <- x B on columns (j, j+1).
void apply_cols(CMatrix& x, int j, const Eigen::Matrix2cd& b) {
  const CMatrix left = x.col(j);
  const CMatrix right = x.col(j + 1);
  x.col(j) = left * b(0, 0) + right * b(1, 0);
  x.col(j + 1) = left * b(0, 1) + right * b(1, 1);
}

struct Mzi {
  int mode;
  double theta;
  double phi;
};

}  // namespace

MeshLayout layout(int modes) {
  if (modes < 2) throw InvalidArgument("layout: need at least two modes, got " + std::to_string(modes));
  MeshLayout out;
  out.reserve(static_cast<std::size_t>(MeshParams::mzi_count(modes)));
  for (int l = 0; l < modes; ++l)
    for (int j = l % 2; j + 1 < modes; j += 2) out.push_back({l, j});
  return out;
}

// ---------------------------------------------------------------------------
// MeshParams

MeshParams::MeshParams(int modes, std::vector<double> theta, std::vector<double> phi,
                       std::vector<double> alpha)
    : m_(modes), theta_(std::move(theta)), phi_(std::move(phi)), alpha_(std::move(alpha)) {
  if (modes < 2) throw InvalidArgument("MeshParams: need at least two modes");
  const auto mzis = static_cast<std::size_t>(mzi_count(modes));
  if (theta_.size() != mzis || phi_.size() != mzis || alpha_.size() != static_cast<std::size_t>(modes))
    throw InvalidArgument("MeshParams: expected " + std::to_string(mzis) + " angles, " +
                          std::to_string(mzis) + " phases and " + std::to_string(modes) +
                          " output phases");
  auto check = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) throw InvalidArgument("MeshParams: non-finite parameter");
  };
  check(theta_);
  check(phi_);
  check(alpha_);
}

MeshParams MeshParams::zeros(int modes) {
  const auto mzis = static_cast<std::size_t>(mzi_count(modes));
  return MeshParams(modes, std::vector<double>(mzis, 0.0), std::vector<double>(mzis, 0.0),
                    std::vector<double>(static_cast<std::size_t>(modes), 0.0));
}

MeshParams MeshParams::from_flat(int modes, const RVector& flat) {
  if (flat.size() != parameter_count(modes))
    throw InvalidArgument("MeshParams::from_flat: expected " + std::to_string(parameter_count(modes)) +
                          " entries, got " + std::to_string(flat.size()));
  auto p = zeros(modes);
  for (int k = 0; k < p.size(); ++k) p[k] = flat(k);
  return p;
}

double MeshParams::operator[](int k) const {
  const int mzis = mzi_count(m_);
  if (k < 0 || k >= size()) throw InvalidArgument("MeshParams: parameter index out of range");
  if (k < mzis) return theta_[static_cast<std::size_t>(k)];
  if (k < 2 * mzis) return phi_[static_cast<std::size_t>(k - mzis)];
  return alpha_[static_cast<std::size_t>(k - 2 * mzis)];
}

double& MeshParams::operator[](int k) {
  const int mzis = mzi_count(m_);
  if (k < 0 || k >= size()) throw InvalidArgument("MeshParams: parameter index out of range");
  if (k < mzis) return theta_[static_cast<std::size_t>(k)];
  if (k < 2 * mzis) return phi_[static_cast<std::size_t>(k - mzis)];
  return alpha_[static_cast<std::size_t>(k - 2 * mzis)];
}

RVector MeshParams::flat() const {
  RVector out(size());
  for (int k = 0; k < size(); ++k) out(k) = (*this)[k];
  return out;
}

// ---------------------------------------------------------------------------
// Forward model and derivatives

ModeUnitary build_unitary(const MeshParams& p) {
  const int m = p.modes();
  const auto placements = layout(m);
  CMatrix s = CMatrix::Identity(m, m);
  for (std::size_t k = 0; k < placements.size(); ++k)
    apply_rows(s, placements[k].mode, mzi_block(p.theta()[k], p.phi()[k]));
  for (int j = 0; j < m; ++j) s.row(j) *= std::polar(1.0, p.alpha()[static_cast<std::size_t>(j)]);
  return ModeUnitary(std::move(s));
}

std::vector<CMatrix> derivative_unitaries(const MeshParams& p) {
  const int m = p.modes();
  const int mzis = MeshParams::mzi_count(m);
  const auto placements = layout(m);

  // prefix[k] = T_{k-1} ... T_0; suffix[k] = D T_{M-1} ... T_{k+1}.
  std::vector<CMatrix> prefix(static_cast<std::size_t>(mzis) + 1);
  prefix[0] = CMatrix::Identity(m, m);
  for (int k = 0; k < mzis; ++k) {
    prefix[static_cast<std::size_t>(k) + 1] = prefix[static_cast<std::size_t>(k)];
    apply_rows(prefix[static_cast<std::size_t>(k) + 1], placements[static_cast<std::size_t>(k)].mode,
               mzi_block(p.theta()[static_cast<std::size_t>(k)], p.phi()[static_cast<std::size_t>(k)]));
  }
  CMatrix phases = CMatrix::Zero(m, m);
  for (int j = 0; j < m; ++j) phases(j, j) = std::polar(1.0, p.alpha()[static_cast<std::size_t>(j)]);
  std::vector<CMatrix> suffix(static_cast<std::size_t>(mzis));
  CMatrix acc = phases;
  for (int k = mzis - 1; k >= 0; --k) {
    suffix[static_cast<std::size_t>(k)] = acc;
    apply_cols(acc, placements[static_cast<std::size_t>(k)].mode,
               mzi_block(p.theta()[static_cast<std::size_t>(k)], p.phi()[static_cast<std::size_t>(k)]));
  }

  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(p.size()));
  auto sandwich = [&](int k, const Eigen::Matrix2cd& d) {
    const int j = placements[static_cast<std::size_t>(k)].mode;
    const CMatrix rows = d * prefix[static_cast<std::size_t>(k)].middleRows(j, 2);
    return CMatrix(suffix[static_cast<std::size_t>(k)].middleCols(j, 2) * rows);
  };
  for (int k = 0; k < mzis; ++k)
    out.push_back(sandwich(k, mzi_block_dtheta(p.theta()[static_cast<std::size_t>(k)], p.phi()[static_cast<std::size_t>(k)])));
  for (int k = 0; k < mzis; ++k)
    out.push_back(sandwich(k, mzi_block_dphi(p.theta()[static_cast<std::size_t>(k)], p.phi()[static_cast<std::size_t>(k)])));
  const CMatrix& s = acc;  // acc now holds the full S
  for (int j = 0; j < m; ++j) {
    CMatrix d = CMatrix::Zero(m, m);
    d.row(j) = Complex(0.0, 1.0) * s.row(j);
    out.push_back(std::move(d));
  }
  return out;
}

CMatrix derivative_unitary(const MeshParams& p, int k) {
  if (k < 0 || k >= p.size())
    throw InvalidArgument("derivative_unitary: parameter index " + std::to_string(k) + " out of range");
  return derivative_unitaries(p)[static_cast<std::size_t>(k)];
}

CMatrix tangent_generator(const MeshParams& p, int k) {
  const CMatrix d = derivative_unitary(p, k);
  return build_unitary(p).matrix().adjoint() * d;
}

// ---------------------------------------------------------------------------
// Decomposition

MeshParams decompose(const ModeUnitary& s, double tol) {
  const int m = s.modes();
  if (m < 2) throw InvalidArgument("decompose: need at least two modes");
  CMatrix u = s.matrix();
  const double residual = (u.adjoint() * u - CMatrix::Identity(m, m)).norm();
  if (!(residual <= tol))
    throw ValidationError("decompose: input not unitary (residual " + std::to_string(residual) + ")");

  std::vector<Mzi> right;  // U <- U T^{-1}, input side, in application order
  std::vector<Mzi> left;   // U <- T U, output side, in nulling order

  for (int i = 0; i + 1 < m; ++i) {
    if (i % 2 == 0) {
      for (int j = 0; j <= i; ++j) {
        const int r = m - 1 - j, c = i - j;
        const Complex x = u(r, c), y = u(r, c + 1);
        Mzi op{c, 0.0, 0.0};
        if (std::abs(x) > kNullTolerance) {
          op.theta = std::atan2(std::abs(x), std::abs(y));
          op.phi = std::abs(y) > kNullTolerance ? std::arg(x) - std::arg(y) : 0.0;
        }
        apply_cols(u, c, mzi_block(op.theta, op.phi).adjoint());
        u(r, c) = 0.0;
        right.push_back(op);
      }
    } else {
      for (int j = 1; j <= i + 1; ++j) {
        const int r = m + j - i - 2, c = j - 1;
        const Complex x = u(r, c), y = u(r - 1, c);
        Mzi op{r - 1, 0.0, 0.0};
        if (std::abs(x) > kNullTolerance) {
          op.theta = std::atan2(std::abs(x), std::abs(y));
          op.phi = std::abs(y) > kNullTolerance ? kPi + std::arg(x) - std::arg(y) : 0.0;
        }
        apply_rows(u, r - 1, mzi_block(op.theta, op.phi));
        u(r, c) = 0.0;
        left.push_back(op);
      }
    }
  }

  // Now L_k ... L_1 U0 R_1^{-1} ... R_p^{-1} = D, so
  // U0 = L_1^{-1} ... L_k^{-1} D R_p ... R_1. Push D through each L^{-1}:
  // T^{-1}(theta, phi) diag(d1, d2) = diag(d1', d2') T(theta, phi').
  Eigen::VectorXcd d = u.diagonal();
  std::vector<Mzi> pushed;
  for (auto it = left.rbegin(); it != left.rend(); ++it) {
    const int j = it->mode;
    const Complex d1 = d(j), d2 = d(j + 1);
    Mzi op{j, it->theta, 0.0};
    if (it->theta == 0.0) {
      d(j) = std::polar(1.0, -it->phi) * d1;
    } else {
      op.phi = std::arg(-d1 / d2);
      d(j) = -std::polar(1.0, -it->phi) * d2;
    }
    pushed.push_back(op);
  }

  // Application order: R_1 .. R_p, then the pushed MZIs from the innermost
  // L_k outward to L_1.
  std::vector<Mzi> sequence = right;
  sequence.insert(sequence.end(), pushed.begin(), pushed.end());

  const auto placements = layout(m);
  const int mzis = MeshParams::mzi_count(m);
  std::vector<double> theta(static_cast<std::size_t>(mzis), 0.0);
  std::vector<double> phi(static_cast<std::size_t>(mzis), 0.0);
  std::vector<bool> filled(static_cast<std::size_t>(mzis), false);
  std::vector<int> depth(static_cast<std::size_t>(m), 0);
  for (const auto& op : sequence) {
    const int j = op.mode;
    int layer = std::max(depth[static_cast<std::size_t>(j)], depth[static_cast<std::size_t>(j) + 1]);
    if (layer % 2 != j % 2) ++layer;
    depth[static_cast<std::size_t>(j)] = depth[static_cast<std::size_t>(j) + 1] = layer + 1;
    std::size_t slot = placements.size();
    for (std::size_t k = 0; k < placements.size(); ++k)
      if (placements[k] == MziPlacement{layer, j}) slot = k;
    if (slot == placements.size() || filled[slot])
      throw std::logic_error("decompose: nulling sequence does not tile the rectangular mesh");
    filled[slot] = true;
    theta[slot] = op.theta;
    phi[slot] = wrap_two_pi(op.phi);
  }

  std::vector<double> alpha(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) alpha[static_cast<std::size_t>(j)] = wrap_two_pi(std::arg(d(j)));
  return MeshParams(m, std::move(theta), std::move(phi), std::move(alpha));
}

}  // namespace pvqc
