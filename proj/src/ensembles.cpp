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

#include "pvqc/ensembles.hpp"

#include <cmath>

#include <Eigen/QR>

namespace pvqc {

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Stream::Stream(std::uint64_t seed) : engine_(seed) {}

Stream::Stream(std::uint64_t master_seed, std::uint64_t cell_key, std::uint64_t sample_index, Purpose purpose) {
  auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffULL); };
  auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(master_seed), hi(master_seed), lo(cell_key), hi(cell_key),
                    lo(sample_index), hi(sample_index), static_cast<std::uint32_t>(purpose)};
  engine_.seed(seq);
}

double Stream::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
double Stream::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
double Stream::exponential() { return std::exponential_distribution<double>(1.0)(engine_); }
std::uint64_t Stream::below(std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
}

Initializer parse_initializer(std::string_view name) {
  if (name == "uniform") return Initializer::Uniform;
  if (name == "beta") return Initializer::Beta;
  if (name == "haar") return Initializer::Haar;
  throw ConfigError("unknown initializer '" + std::string(name) + "' (expected uniform, beta or haar)");
}

std::string initializer_name(Initializer init) {
  switch (init) {
    case Initializer::Uniform: return "uniform";
    case Initializer::Beta: return "beta";
    case Initializer::Haar: return "haar";
  }
  return "";
}

MeshParams init_uniform(int modes, Stream& stream) {
  auto p = MeshParams::zeros(modes);
  for (int k = 0; k < p.size(); ++k) {
    // uniform() < 1 but kTwoPi * u can round up to 2 pi.
    const double x = kTwoPi * stream.uniform();
    p[k] = x < kTwoPi ? x : 0.0;
  }
  return p;
}

MeshParams init_beta(int modes, Stream& stream) {
  auto p = MeshParams::zeros(modes);
  for (int k = 0; k < p.size(); ++k) {
    const double s = std::sin(0.5 * kPi * stream.uniform());
    p[k] = kPi * s * s;
  }
  return p;
}

CMatrix haar_unitary(int modes, Stream& stream) {
  CMatrix z(modes, modes);
  const double scale = 1.0 / std::sqrt(2.0);
  for (int c = 0; c < modes; ++c)
    for (int r = 0; r < modes; ++r) {
      const double re = stream.normal();
      const double im = stream.normal();
      z(r, c) = Complex(re, im) * scale;
    }
  const Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < modes; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0);
  }
  return q;
}

MeshParams init_haar(int modes, Stream& stream) {
  return decompose(ModeUnitary(haar_unitary(modes, stream)));
}

MeshParams initialize(Initializer init, int modes, Stream& stream) {
  switch (init) {
    case Initializer::Uniform: return init_uniform(modes, stream);
    case Initializer::Beta: return init_beta(modes, stream);
    case Initializer::Haar: return init_haar(modes, stream);
  }
  throw InvalidArgument("initialize: unknown initializer");
}

TargetDistribution sample_target(const OutcomeSet& outcomes, Stream& stream) {
  if (outcomes.size() == 0) throw InvalidArgument("sample_target: empty outcome set");
  RVector q(static_cast<Eigen::Index>(outcomes.size()));
  for (Eigen::Index x = 0; x < q.size(); ++x) q(x) = stream.exponential();
  q /= q.sum();
  return TargetDistribution(std::move(q));
}

}  // namespace pvqc
