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

#include "pvqc/fock.hpp"
#include "pvqc/mesh.hpp"
#include "pvqc/postselect.hpp"

namespace pvqc {

/// Floor on the success probability s.
inline constexpr double kDefaultFloor = 1e-12;
/// Outcomes with p_x below this are left out of the sqrt(q_x / p_x) sum.
inline constexpr double kGradientCutoff = 1e-14;

struct PostselectedDistribution {
  RVector a;  // unnormalized, one entry per retained outcome
  double s = 0.0;
  RVector p;  // a / max(s, epsilon)
  bool floor_applied = false;
};

class TargetDistribution {
 public:
  /// Requires q_x >= 0 and sum q = 1 within 1e-12.
  explicit TargetDistribution(RVector q);
  const RVector& q() const { return q_; }
  Eigen::Index size() const { return q_.size(); }

 private:
  RVector q_;
};

/// L = 1 - (sum_x sqrt(p_x q_x))^2, clamped to [0, 1].
double bhattacharyya_loss(const RVector& p, const TargetDistribution& q);

/// sum_x (p_x - q_x)^2 / q_x. Every q_x must be positive.
double chi_squared(const RVector& p, const RVector& q);

/// Everything needed to evaluate one (m, n, regime, input) configuration:
/// the Fock ladder and the retained outcome set. Immutable after
/// construction and safe to share between threads; each call allocates
/// its own scratch.
class LossModel {
 public:
  LossModel(int modes, int photons, PostselectionRegime regime, OccupationVector input,
            double epsilon = kDefaultFloor);

  int modes() const { return ladder_.modes(); }
  int photons() const { return ladder_.photons(); }
  int parameter_count() const { return MeshParams::parameter_count(modes()); }
  const PostselectionRegime& regime() const { return regime_; }
  const OccupationVector& input() const { return input_; }
  const OutcomeSet& outcomes() const { return outcomes_; }
  const FockBasis& basis() const { return ladder_.top(); }
  double epsilon() const { return epsilon_; }

  CVector amplitudes(const MeshParams& p) const;
  PostselectedDistribution distribution(const MeshParams& p) const;
  double loss(const MeshParams& p, const TargetDistribution& q) const;

  struct Evaluation {
    double loss;
    RVector gradient;
    PostselectedDistribution distribution;
  };
  /// Loss and its exact gradient. The gradient is contracted as
  /// dL/dk = 2 Re sum_jl (dS/dk S^dagger)_jl <phi| a_j^dagger a_l |psi>,
  /// where phi carries the per-outcome loss weights, so one lift of S
  /// serves all m^2 parameters.
  Evaluation evaluate(const MeshParams& p, const TargetDistribution& q) const;

 private:
  PostselectedDistribution distribution_from(const CVector& psi) const;

  PostselectionRegime regime_;
  OccupationVector input_;
  double epsilon_;
  FockLadder ladder_;
  OutcomeSet outcomes_;
};

PostselectedDistribution postselected_distribution(const MeshParams& p, const OccupationVector& input,
                                                   const PostselectionRegime& regime, const FockBasis& basis,
                                                   double epsilon = kDefaultFloor);

RVector bhattacharyya_gradient(const MeshParams& p, const OccupationVector& input,
                               const PostselectionRegime& regime, const FockBasis& basis,
                               const TargetDistribution& q, double epsilon = kDefaultFloor);

}  // namespace pvqc
