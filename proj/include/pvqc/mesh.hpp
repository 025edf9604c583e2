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

#include <vector>

#include "pvqc/common.hpp"
#include "pvqc/fock.hpp"

namespace pvqc {

// Rectangular MZI mesh. Each MZI on modes (j, j+1) acts as
//
//   T(theta, phi) = [[e^{i phi} cos theta, -sin theta],
//                    [e^{i phi} sin theta,  cos theta]]
//
// and the mesh realizes S = diag(e^{i alpha}) T_{M-1} ... T_1 T_0 with the
// MZIs applied in layout order. Flat parameter index k runs over theta
// (k < M), then phi (M <= k < 2M), then alpha (2M <= k < 2M + m), where
// M = m(m-1)/2; the total is m^2.

struct MziPlacement {
  int layer;
  int mode;  // upper mode j; the MZI couples (j, j+1)

  bool operator==(const MziPlacement&) const = default;
};

using MeshLayout = std::vector<MziPlacement>;

/// Layer-by-layer rectangular tiling: layer l holds pairs (j, j+1) with
/// j = l mod 2, for l = 0..m-1.
MeshLayout layout(int modes);

class MeshParams {
 public:
  MeshParams(int modes, std::vector<double> theta, std::vector<double> phi,
             std::vector<double> alpha);

  static MeshParams zeros(int modes);
  static MeshParams from_flat(int modes, const RVector& flat);

  static int mzi_count(int modes) { return modes * (modes - 1) / 2; }
  static int parameter_count(int modes) { return modes * modes; }

  int modes() const { return m_; }
  int size() const { return parameter_count(m_); }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& phi() const { return phi_; }
  const std::vector<double>& alpha() const { return alpha_; }

  double operator[](int k) const;
  double& operator[](int k);
  RVector flat() const;

 private:
  int m_;
  std::vector<double> theta_;
  std::vector<double> phi_;
  std::vector<double> alpha_;
};

ModeUnitary build_unitary(const MeshParams& p);

/// Clements-style nulling decomposition. Output angles lie in canonical
/// ranges: theta in [0, pi/2], phi and alpha in [0, 2 pi). Where an MZI is
/// fully transmitting (theta = 0) its phase is redundant and reported as 0.
MeshParams decompose(const ModeUnitary& s, double tol = 1e-8);

/// dS / d(parameter k). Not unitary.
CMatrix derivative_unitary(const MeshParams& p, int k);

/// All P derivatives at once from cached prefix and suffix products.
std::vector<CMatrix> derivative_unitaries(const MeshParams& p);

/// H_k = S^dagger dS/dk, anti-Hermitian.
CMatrix tangent_generator(const MeshParams& p, int k);

}  // namespace pvqc
