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

#include "pvqc/liealg.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace pvqc {

namespace {

constexpr double kMaxCondition = 1e12;

using SparseOp = Eigen::SparseMatrix<Complex>;

// Solves G x = v after checking the conditioning of G.
double quadratic_form_inverse(const RMatrix& g, const RVector& v) {
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) {
    std::ostringstream os;
    os << "Gram matrix is degenerate (eigenvalues in [" << lo << ", " << hi
       << "]); restricted generators are linearly dependent";
    throw DegenerateRestrictionError(os.str());
  }
  const Eigen::LLT<RMatrix> llt(g);
  return v.dot(llt.solve(v));
}

}  // namespace

Algebra parse_algebra(std::string_view name) {
  if (name == "u") return Algebra::U;
  if (name == "su") return Algebra::SU;
  throw ConfigError("unknown algebra '" + std::string(name) + "' (expected u or su)");
}

std::string algebra_name(Algebra which) { return which == Algebra::U ? "u" : "su"; }

GeneratorBasis generator_basis(int modes, Algebra which) {
  if (modes < 2) throw InvalidArgument("generator_basis: need at least two modes");
  GeneratorBasis out{modes, which, {}};
  out.elements.reserve(static_cast<std::size_t>(modes * modes));
  for (int j = 0; j < modes; ++j) {
    for (int k = j + 1; k < modes; ++k) {
      CMatrix sym = CMatrix::Zero(modes, modes);
      sym(j, k) = sym(k, j) = 1.0;
      out.elements.push_back(std::move(sym));
      CMatrix anti = CMatrix::Zero(modes, modes);
      anti(j, k) = Complex(0.0, -1.0);
      anti(k, j) = Complex(0.0, 1.0);
      out.elements.push_back(std::move(anti));
    }
  }
  for (int l = 1; l < modes; ++l) {
    CMatrix diag = CMatrix::Zero(modes, modes);
    const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) diag(j, j) = scale;
    diag(l, l) = -l * scale;
    out.elements.push_back(std::move(diag));
  }
  if (which == Algebra::U) out.elements.push_back(CMatrix::Identity(modes, modes));
  return out;
}

RMatrix gram_matrix(const std::vector<SectorOperator>& lifted, const OutcomeSet& retained) {
  if (retained.retained.empty()) throw ConfigError("gram_matrix: empty retained set");
  for (const auto& op : lifted)
    if (!op.same_sector(lifted.front())) throw InvalidArgument("gram_matrix: operators live in different sectors");

  const auto k = static_cast<Eigen::Index>(retained.size());
  std::vector<CMatrix> restricted;
  restricted.reserve(lifted.size());
  for (const auto& op : lifted) {
    CMatrix r(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b)
        r(a, b) = op.matrix()(static_cast<Eigen::Index>(retained.retained[static_cast<std::size_t>(a)]),
                              static_cast<Eigen::Index>(retained.retained[static_cast<std::size_t>(b)]));
    restricted.push_back(std::move(r));
  }
  const auto n = static_cast<Eigen::Index>(lifted.size());
  RMatrix g(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a; b < n; ++b)
      g(a, b) = g(b, a) =
          restricted[static_cast<std::size_t>(a)].cwiseProduct(restricted[static_cast<std::size_t>(b)].conjugate()).sum().real();
  return g;
}

GPurityReport g_purity(const SectorOperator& o, const PostselectionRegime& regime,
                       const FockBasis& basis, Algebra which) {
  return g_purity(o, regime, basis, generator_basis(basis.modes(), which));
}

GPurityReport g_purity(const SectorOperator& o, const PostselectionRegime& regime,
                       const FockBasis& basis, const GeneratorBasis& generators) {
  if (o.modes() != basis.modes() || o.photons() != basis.photons())
    throw InvalidArgument("g_purity: observable and basis are in different sectors");
  if (generators.modes != basis.modes()) throw InvalidArgument("g_purity: generator basis has wrong mode count");
  if (!o.is_hermitian(1e-10)) throw ValidationError("g_purity: observable is not Hermitian");

  const auto outcomes = retained_indices(regime, basis);
  std::vector<bool> keep(basis.size(), false);
  for (auto i : outcomes.retained) keep[i] = true;

  std::vector<SparseOp> lifted;
  lifted.reserve(generators.elements.size());
  for (const auto& h : generators.elements) lifted.push_back(second_quantize(h, basis));

  const auto n = static_cast<Eigen::Index>(lifted.size());
  RMatrix g(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a; b < n; ++b)
      g(a, b) = g(b, a) =
          lifted[static_cast<std::size_t>(a)].conjugate().cwiseProduct(lifted[static_cast<std::size_t>(b)]).sum().real();

  RVector v(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    Complex acc(0.0);
    const auto& h = lifted[static_cast<std::size_t>(a)];
    for (Eigen::Index col = 0; col < h.outerSize(); ++col) {
      if (!keep[static_cast<std::size_t>(col)]) continue;
      for (SparseOp::InnerIterator it(h, col); it; ++it) {
        if (!keep[static_cast<std::size_t>(it.row())]) continue;
        acc += std::conj(it.value()) * o.matrix()(it.row(), col);
      }
    }
    v(a) = acc.real();
  }

  return GPurityReport{regime.name(), basis.modes(), basis.photons(), quadratic_form_inverse(g, v),
                       outcomes.size()};
}

double predicted_variance(const SectorOperator& rho, const SectorOperator& o, int modes) {
  if (!rho.same_sector(o)) throw InvalidArgument("predicted_variance: rho and O live in different sectors");
  if (rho.modes() != modes) throw InvalidArgument("predicted_variance: mode count mismatch");
  const FockBasis basis(modes, rho.photons());
  const auto all = PostselectionRegime::allow_bunching();
  const auto su = generator_basis(modes, Algebra::SU);
  const double p_rho = g_purity(rho, all, basis, su).purity;
  const double p_o = g_purity(o, all, basis, su).purity;
  return p_rho * p_o / (modes * modes - 1.0);
}

ReferenceObservable parse_reference_observable(std::string_view name) {
  if (name == "number0") return ReferenceObservable::ModeNumber;
  if (name == "first_outcome") return ReferenceObservable::FirstOutcome;
  if (name == "success") return ReferenceObservable::Success;
  throw ConfigError("unknown observable '" + std::string(name) + "' (expected number0, first_outcome or success)");
}

std::string reference_observable_name(ReferenceObservable kind) {
  switch (kind) {
    case ReferenceObservable::ModeNumber: return "number0";
    case ReferenceObservable::FirstOutcome: return "first_outcome";
    case ReferenceObservable::Success: return "success";
  }
  return "";
}

SectorOperator reference_observable(ReferenceObservable kind, const PostselectionRegime& regime,
                                    const FockBasis& basis) {
  const int m = basis.modes(), n = basis.photons();
  switch (kind) {
    case ReferenceObservable::ModeNumber: {
      CMatrix diag = CMatrix::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
      for (std::size_t i = 0; i < basis.size(); ++i)
        diag(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = static_cast<double>(basis[i][0]);
      return pulled_back_observable(regime, SectorOperator(m, n, std::move(diag)), basis);
    }
    case ReferenceObservable::FirstOutcome: {
      const auto outcomes = retained_indices(regime, basis);
      return pulled_back_observable(regime, SectorOperator::projector(m, n, outcomes.retained.front()), basis);
    }
    case ReferenceObservable::Success:
      return success_observable(regime, basis);
  }
  throw InvalidArgument("reference_observable: unknown kind");
}

}  // namespace pvqc
