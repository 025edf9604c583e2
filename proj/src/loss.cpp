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

#include "pvqc/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pvqc {

namespace {

double coefficient(const RVector& p, const RVector& q) {
  return (p.array() * q.array()).sqrt().sum();
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

void check_sizes(const RVector& p, Eigen::Index q, const char* who) {
  if (p.size() != q)
    throw InvalidArgument(std::string(who) + ": length mismatch (" + std::to_string(p.size()) + " vs " +
                          std::to_string(q) + ")");
}

void check_model_inputs(const MeshParams& p, const OccupationVector& input, const FockBasis& basis) {
  if (p.modes() != basis.modes() || input.modes() != basis.modes())
    throw InvalidArgument("loss: mode count mismatch between parameters, input and basis");
  if (input.photons() != basis.photons())
    throw InvalidArgument("loss: input photon number does not match basis sector");
}

}  // namespace

TargetDistribution::TargetDistribution(RVector q) : q_(std::move(q)) {
  if (q_.size() == 0) throw InvalidArgument("TargetDistribution: empty");
  if ((q_.array() < 0.0).any() || !q_.allFinite()) throw InvalidArgument("TargetDistribution: negative entry");
  if (std::abs(q_.sum() - 1.0) > 1e-12) throw InvalidArgument("TargetDistribution: does not sum to one");
}

double bhattacharyya_loss(const RVector& p, const TargetDistribution& q) {
  check_sizes(p, q.size(), "bhattacharyya_loss");
  if ((p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-8)
    throw InvalidArgument("bhattacharyya_loss: p is not a probability vector");
  const double b = coefficient(p, q.q());
  return clamp_unit(1.0 - b * b);
}

double chi_squared(const RVector& p, const RVector& q) {
  check_sizes(p, q.size(), "chi_squared");
  if ((q.array() <= 0.0).any()) throw InvalidArgument("chi_squared: reference distribution has a zero entry");
  return ((p - q).array().square() / q.array()).sum();
}

// ---------------------------------------------------------------------------
// LossModel

LossModel::LossModel(int modes, int photons, PostselectionRegime regime, OccupationVector input,
                     double epsilon)
    : regime_(regime), input_(std::move(input)), epsilon_(epsilon), ladder_(modes, photons) {
  if (!(epsilon_ > 0.0)) throw InvalidArgument("LossModel: floor must be positive");
  if (input_.modes() != modes || input_.photons() != photons)
    throw InvalidArgument("LossModel: input " + input_.to_string() + " not in sector (m=" +
                          std::to_string(modes) + ", n=" + std::to_string(photons) + ")");
  outcomes_ = retained_indices(regime_, ladder_.top());
}

CVector LossModel::amplitudes(const MeshParams& p) const {
  if (p.modes() != modes()) throw InvalidArgument("LossModel: parameters are for a different mode count");
  return ladder_.evolve(build_unitary(p).matrix(), input_);
}

PostselectedDistribution LossModel::distribution_from(const CVector& psi) const {
  PostselectedDistribution out;
  const auto k = static_cast<Eigen::Index>(outcomes_.size());
  out.a.resize(k);
  for (Eigen::Index x = 0; x < k; ++x)
    out.a(x) = std::norm(psi(static_cast<Eigen::Index>(outcomes_.retained[static_cast<std::size_t>(x)])));
  out.s = out.a.sum();
  out.floor_applied = out.s < epsilon_;
  out.p = out.a / std::max(out.s, epsilon_);
  return out;
}

PostselectedDistribution LossModel::distribution(const MeshParams& p) const {
  return distribution_from(amplitudes(p));
}

double LossModel::loss(const MeshParams& p, const TargetDistribution& q) const {
  const auto dist = distribution(p);
  check_sizes(dist.p, q.size(), "LossModel::loss");
  const double b = coefficient(dist.p, q.q());
  return clamp_unit(1.0 - b * b);
}

LossModel::Evaluation LossModel::evaluate(const MeshParams& p, const TargetDistribution& q) const {
  if (p.modes() != modes()) throw InvalidArgument("LossModel: parameters are for a different mode count");
  const ModeUnitary s = build_unitary(p);
  const CVector psi = ladder_.evolve(s.matrix(), input_);
  auto dist = distribution_from(psi);
  check_sizes(dist.p, q.size(), "LossModel::evaluate");

  const RVector& pr = dist.p;
  const RVector& qr = q.q();
  const double b = coefficient(pr, qr);

  // dL = -B sum_x w_x dp_x with w_x = sqrt(q_x / p_x) over outcomes above the
  // cutoff. Unfloored, dp_x = (da_x - p_x ds) / s; floored, dp_x = da_x / eps.
  // Either way dL = sum_x c_x da_x.
  const auto k = pr.size();
  RVector w = RVector::Zero(k);
  for (Eigen::Index x = 0; x < k; ++x)
    if (pr(x) >= kGradientCutoff) w(x) = std::sqrt(qr(x) / pr(x));
  RVector c(k);
  if (dist.floor_applied) {
    c = -(b / epsilon_) * w;
  } else {
    const double mean_w = w.dot(pr);
    c = -(b / dist.s) * (w.array() - mean_w).matrix();
  }

  // da_x = 2 Re(conj(psi_x) dpsi_x), so dL = 2 Re <phi|dpsi> with phi_x = c_x psi_x.
  CVector phi = CVector::Zero(psi.size());
  for (Eigen::Index x = 0; x < k; ++x) {
    const auto idx = static_cast<Eigen::Index>(outcomes_.retained[static_cast<std::size_t>(x)]);
    phi(idx) = c(x) * psi(idx);
  }
  const CMatrix one_body = ladder_.one_body_matrix(phi, psi);
  // sum_jl (dS S^dagger)_jl M_jl = Tr[dS (S^dagger M^T)].
  const CMatrix g = s.matrix().adjoint() * one_body.transpose();
  const CMatrix gt = g.transpose();

  const auto derivs = derivative_unitaries(p);
  RVector grad(static_cast<Eigen::Index>(derivs.size()));
  for (std::size_t i = 0; i < derivs.size(); ++i)
    grad(static_cast<Eigen::Index>(i)) = 2.0 * derivs[i].cwiseProduct(gt).sum().real();

  return Evaluation{clamp_unit(1.0 - b * b), std::move(grad), std::move(dist)};
}

// ---------------------------------------------------------------------------

PostselectedDistribution postselected_distribution(const MeshParams& p, const OccupationVector& input,
                                                   const PostselectionRegime& regime, const FockBasis& basis,
                                                   double epsilon) {
  check_model_inputs(p, input, basis);
  return LossModel(basis.modes(), basis.photons(), regime, input, epsilon).distribution(p);
}

RVector bhattacharyya_gradient(const MeshParams& p, const OccupationVector& input,
                               const PostselectionRegime& regime, const FockBasis& basis,
                               const TargetDistribution& q, double epsilon) {
  check_model_inputs(p, input, basis);
  return LossModel(basis.modes(), basis.photons(), regime, input, epsilon).evaluate(p, q).gradient;
}

}  // namespace pvqc
