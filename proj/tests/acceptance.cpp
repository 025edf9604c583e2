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

// Acceptance checks AC-1 .. AC-10. Each prints one line:
//   AC-N PASS|FAIL <measured quantities> (<seconds>s)
// Exit status is 0 when every selected check passes, 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "pvqc/config.hpp"
#include "pvqc/fit.hpp"
#include "pvqc/fock.hpp"
#include "pvqc/harness.hpp"
#include "pvqc/liealg.hpp"
#include "pvqc/loss.hpp"
#include "support.hpp"

using namespace pvqc;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

fs::path g_work_dir = "acceptance_work";

// ---------------------------------------------------------------------------

Verdict ac1_hom() {
  auto p = MeshParams::zeros(2);
  p[0] = kPi / 4;
  const LossModel model(2, 2, PostselectionRegime::allow_bunching(), {1, 1});
  const RVector d = model.distribution(p).p;  // outcomes (2,0), (1,1), (0,2)
  const double dev = std::max({std::abs(d(0) - 0.5), std::abs(d(1)), std::abs(d(2) - 0.5)});
  return {dev <= 1e-10, "p(2,0)=" + num(d(0)) + " p(1,1)=" + num(d(1)) + " p(0,2)=" + num(d(2)) +
                            " max_dev=" + num(dev) + " tol=1e-10"};
}

Verdict ac2_permanent() {
  Stream rng(20260102);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int k = 2 + i % 6;
    const CMatrix a = testing::random_complex(k, k, rng);
    const Complex naive = permanent_naive(a);
    worst = std::max(worst, std::abs(permanent(a) - naive) / std::abs(naive));
  }
  return {worst <= 1e-10, "matrices=500 sizes=2..7 max_rel_err=" + num(worst) + " tol=1e-10"};
}

Verdict ac3_representation() {
  Stream rng(20260103);
  double hom = 0.0, unit = 0.0, comm = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int m = 2 + i % 4;
    const int n = 1 + (i / 4) % 3;
    const FockBasis b(m, n);
    const ModeUnitary s1(haar_unitary(m, rng));
    const ModeUnitary s2(haar_unitary(m, rng));
    const CMatrix p1 = lift_unitary(s1, b).matrix();
    const CMatrix p2 = lift_unitary(s2, b).matrix();
    hom = std::max(hom, (lift_unitary(s1 * s2, b).matrix() - p1 * p2).norm());
    unit = std::max(unit, (p1.adjoint() * p1 - CMatrix::Identity(p1.rows(), p1.cols())).norm());

    const CMatrix h1 = testing::random_hermitian(m, rng);
    const CMatrix h2 = testing::random_hermitian(m, rng);
    const CMatrix l1 = lift_generator(h1, b).matrix();
    const CMatrix l2 = lift_generator(h2, b).matrix();
    const CMatrix lc = CMatrix(second_quantize(h1 * h2 - h2 * h1, b));
    comm = std::max(comm, (l1 * l2 - l2 * l1 - lc).norm());
  }
  const bool ok = hom <= 1e-9 && unit <= 1e-9 && comm <= 1e-9;
  return {ok, "pairs=100 homomorphism=" + num(hom) + " unitarity=" + num(unit) + " commutator=" + num(comm) +
                  " tol=1e-9"};
}

Verdict ac4_variance() {
  const int samples = 100000;
  auto monte_carlo = [&](int m, const SectorOperator& rho, const SectorOperator& o, std::uint64_t seed) {
    Stream haar(seed);
    std::vector<RVector> values(samples);
    for (auto& v : values) v = RVector::Constant(1, expectation_value(ModeUnitary(haar_unitary(m, haar)), rho, o));
    Stream boot(seed + 1);
    return estimate_variance(values, boot);
  };

  const auto rho2 = SectorOperator::projector(2, 1, 0);
  const SectorOperator z(2, 1, CMatrix{{1.0, 0.0}, {0.0, -1.0}});
  const double pred2 = predicted_variance(rho2, z, 2);
  const auto mc2 = monte_carlo(2, rho2, z, 20260104);
  const bool exact = std::abs(pred2 - 1.0 / 3.0) <= 1e-14;
  const double z2 = std::abs(mc2.var_mean - pred2) / mc2.var_se;

  // m = 3: a fixed traceless generator lifted to the one-photon sector.
  const FockBasis b3(3, 1);
  CMatrix h(3, 3);
  h << 1.0, Complex(0.3, -0.4), 0.2, Complex(0.3, 0.4), -0.5, Complex(0.0, 0.7), 0.2, Complex(0.0, -0.7), -0.5;
  const auto o3 = lift_generator(h, b3);
  const auto rho3 = SectorOperator::projector(3, 1, 0);
  const double pred3 = predicted_variance(rho3, o3, 3);
  const auto mc3 = monte_carlo(3, rho3, o3, 20260105);
  const double z3 = std::abs(mc3.var_mean - pred3) / mc3.var_se;

  const bool ok = exact && z2 <= 3.0 && z3 <= 3.0;
  return {ok, "m=2 predicted=" + num(pred2) + " mc=" + num(mc2.var_mean) + " dev/se=" + num(z2) +
                  "; m=3 predicted=" + num(pred3) + " mc=" + num(mc3.var_mean) + " dev/se=" + num(z3) +
                  " samples=100000 tol=3se"};
}

Verdict ac5_gradient() {
  const GradcheckSettings settings;
  double worst = 0.0;
  int failed = 0, max_m = 0, max_n = 0;
  std::map<std::string, int> regimes;
  for (const auto& c : default_gradcheck_cases(20260105, 30)) {
    const auto r = run_gradcheck(c, settings);
    worst = std::max(worst, r.max_scaled_error);
    if (r.max_scaled_error > settings.rel_tol) ++failed;
    max_m = std::max(max_m, c.modes);
    max_n = std::max(max_n, c.photons);
    ++regimes[c.regime.name()];
  }
  const bool ok = failed == 0 && regimes.size() == 3 && max_m <= 8 && max_n <= 4;
  return {ok, "configs=30 regimes=" + std::to_string(regimes.size()) + " max_m=" + std::to_string(max_m) +
                  " max_n=" + std::to_string(max_n) + " failed=" + std::to_string(failed) +
                  " max_rel_err=" + num(worst) + " tol=1e-6 (abs 1e-9)"};
}

Verdict ac6_expansion() {
  Stream rng(20260106);
  int passed = 0;
  double worst_ratio = INFINITY;
  for (int pair = 0; pair < 10; ++pair) {
    const int k = 3 + pair % 5;
    RVector q(k);
    do {
      for (int i = 0; i < k; ++i) q(i) = rng.exponential();
      q /= q.sum();
    } while (q.minCoeff() < 0.05);
    RVector delta(k);
    for (int i = 0; i < k; ++i) delta(i) = rng.normal();
    delta.array() -= delta.mean();
    delta /= (delta.array() / q.array()).abs().maxCoeff();
    const TargetDistribution target(q);
    auto residual = [&](double t) {
      const RVector p = q + t * delta;
      return std::abs(bhattacharyya_loss(p, target) - 0.25 * chi_squared(p, q));
    };
    bool ok = true;
    for (double t : {1e-2, 5e-3, 2.5e-3}) {
      const double ratio = residual(t) / residual(t / 2);
      worst_ratio = std::min(worst_ratio, ratio);
      ok = ok && ratio >= 7.0;
    }
    passed += ok;
  }
  return {passed == 10, "pairs_passed=" + std::to_string(passed) + "/10 min_ratio=" + num(worst_ratio) + " need>=7"};
}

// The scaled regime-comparison grid shared by AC-7 and AC-10.
SweepConfig trend_grid(int workers, const std::string& output) {
  SweepConfig c;
  c.regimes = {PostselectionRegime::allow_bunching(), PostselectionRegime::collision_free(),
               PostselectionRegime::rail_code(2)};
  c.inits = {Initializer::Uniform};
  c.n_min = 3;
  c.n_max = 7;
  c.samples = 200;
  c.master_seed = 20260101;
  // Fock at N = 7 has sector dimension C(20, 7) = 77520.
  c.max_dim = 100000;
  c.workers = workers;
  c.output = output;
  return c;
}

Verdict ac7_trend() {
  fs::create_directories(g_work_dir);
  const auto rows = sweep(trend_grid(0, (g_work_dir / "ac7.csv").string()));
  std::map<std::pair<std::string, int>, VarianceEstimate> by;
  for (const auto& r : rows) by[{r.cell.regime.name(), r.cell.logical_units}] = r.estimate;

  bool finite = true, ordered = true;
  int separated = 0;
  std::ostringstream table;
  for (int n = 3; n <= 7; ++n) {
    const auto& f = by.at({"fock", n});
    const auto& u = by.at({"unbunched", n});
    const auto& d = by.at({"dual_rail", n});
    for (const auto* e : {&f, &u, &d}) finite = finite && std::isfinite(e->var_mean) && e->var_mean > 0.0;
    const bool strict = d.var_mean < u.var_mean && u.var_mean < f.var_mean;
    ordered = ordered && strict;
    const bool apart = strict && d.var_mean + 2 * d.var_se < u.var_mean - 2 * u.var_se &&
                       u.var_mean + 2 * u.var_se < f.var_mean - 2 * f.var_se;
    separated += apart;
    table << " N=" << n << ":d=" << num(d.var_mean) << ",u=" << num(u.var_mean) << ",f=" << num(f.var_mean);
  }
  const bool ok = finite && ordered && separated >= 4;
  return {ok, std::string("ordered dual<unbunched<fock at all N: ") + (ordered ? "yes" : "no") +
                  " separated=" + std::to_string(separated) + "/5 (need 4) positive_finite=" +
                  (finite ? "yes" : "no") + ";" + table.str()};
}

Verdict ac8_purity() {
  const std::vector<PostselectionRegime> regimes{PostselectionRegime::allow_bunching(),
                                                 PostselectionRegime::collision_free(),
                                                 PostselectionRegime::rail_code(2)};
  const PurityConfig defaults;
  fs::create_directories(g_work_dir);
  std::ofstream csv(g_work_dir / "ac8.csv");
  csv << "regime,m,n,subspace_dim,purity\n";

  // Ordering under the default observable decides the verdict; number0 is reported alongside.
  auto ordered = [&](ReferenceObservable obs, std::ostream* out, std::string& detail) {
    bool ok = true;
    for (int m : {4, 6}) {
      const FockBasis b(m, m / 2);
      double last = INFINITY;
      detail += " m=" + std::to_string(m) + ":";
      for (const auto& r : regimes) {
        const auto rep = g_purity(reference_observable(obs, r, b), r, b, defaults.algebra);
        if (out) *out << rep.regime << ',' << m << ',' << m / 2 << ',' << rep.subspace_dim << ',' << rep.purity << '\n';
        ok = ok && rep.purity < last;
        last = rep.purity;
        detail += r.name() + "=" + num(rep.purity) + (r.kind() == RegimeKind::RailCode ? "" : ",");
      }
    }
    return ok;
  };
  std::string main_detail, aux_detail;
  const bool ok = ordered(defaults.observable, &csv, main_detail);
  const bool aux = ordered(ReferenceObservable::ModeNumber, nullptr, aux_detail);
  return {ok, "strict fock>unbunched>dual_rail with observable " + reference_observable_name(defaults.observable) +
                  ", algebra " + algebra_name(defaults.algebra) + ":" + main_detail + "; number0 " +
                  (aux ? "ordered" : "not ordered") + ":" + aux_detail};
}

Verdict ac9_fits() {
  std::vector<ScalingPoint> exp_pts, pow_pts;
  for (int n = 2; n <= 12; ++n) {
    exp_pts.emplace_back(n, 0.8 * std::exp(-0.35 * n));
    pow_pts.emplace_back(n, 0.25 * std::pow(n, -2.2));
  }
  const auto e = fit_scaling(exp_pts, FitModel::Exponential);
  const auto p = fit_scaling(pow_pts, FitModel::Power);
  const double param_err = std::max({std::abs(e.coefficients[0] - 0.8), std::abs(e.coefficients[1] - 0.35),
                                     std::abs(p.coefficients[0] - 0.25), std::abs(p.coefficients[1] - 2.2)});
  const double r2_err = std::max(std::abs(e.r_squared - 1.0), std::abs(p.r_squared - 1.0));

  int correct = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Stream rng(20260109 + seed);
    const bool exponential = seed % 2 == 0;
    std::vector<ScalingPoint> pts;
    for (const auto& [n, v] : exponential ? exp_pts : pow_pts) pts.emplace_back(n, v * (1.0 + 0.01 * rng.normal()));
    const double aic_e = fit_scaling(pts, FitModel::Exponential).aic;
    const double aic_p = fit_scaling(pts, FitModel::Power).aic;
    correct += (aic_e < aic_p) == exponential;
  }
  const bool ok = param_err <= 1e-10 && r2_err <= 1e-12 && correct >= 18;
  return {ok, "param_err=" + num(param_err) + " (tol 1e-10) r2_err=" + num(r2_err) +
                  " aic_correct=" + std::to_string(correct) + "/20 (need 18)"};
}

Verdict ac10_determinism() {
  fs::create_directories(g_work_dir);
  // Use at least four workers so the comparison exercises threading on small machines too.
  const int many = std::max(4, static_cast<int>(std::thread::hardware_concurrency()));
  const auto one = (g_work_dir / "ac10_w1.csv").string();
  const auto max = (g_work_dir / "ac10_wmax.csv").string();
  sweep(trend_grid(1, one));
  sweep(trend_grid(many, max));
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const auto a = slurp(one), b = slurp(max);
  const bool ok = !a.empty() && a == b;
  return {ok, "workers 1 vs " + std::to_string(many) + ": " + (ok ? "byte-identical" : "differ") + " (" +
                  std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks; prints one PASS/FAIL line per criterion"};
  std::vector<std::string> only;
  std::string work = g_work_dir.string();
  app.add_option("--only", only, "Run only these criteria, e.g. --only AC-3 (repeatable)");
  app.add_option("--work-dir", work, "Directory for CSV outputs");
  CLI11_PARSE(app, argc, argv);
  g_work_dir = work;

  const std::vector<std::pair<std::string, std::function<Verdict()>>> checks{
      {"AC-1", ac1_hom},        {"AC-2", ac2_permanent}, {"AC-3", ac3_representation}, {"AC-4", ac4_variance},
      {"AC-5", ac5_gradient},   {"AC-6", ac6_expansion}, {"AC-7", ac7_trend},          {"AC-8", ac8_purity},
      {"AC-9", ac9_fits},       {"AC-10", ac10_determinism}};

  for (const auto& name : only) {
    if (std::none_of(checks.begin(), checks.end(), [&](const auto& c) { return c.first == name; })) {
      std::cerr << "unknown criterion '" << name << "'\n";
      return 2;
    }
  }

  bool all = true;
  for (const auto& [name, check] : checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << name << (v.pass ? " PASS " : " FAIL ") << v.detail << " (" << num(secs) << "s)" << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
