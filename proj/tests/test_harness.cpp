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

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "pvqc/harness.hpp"

using namespace pvqc;

namespace {

SweepConfig small_config() {
  SweepConfig c;
  c.regimes = {PostselectionRegime::allow_bunching(), PostselectionRegime::rail_code(2)};
  c.inits = {Initializer::Uniform};
  c.n_min = 1;
  c.n_max = 2;
  c.samples = 12;
  c.master_seed = 77;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Restores an environment variable on scope exit.
class EnvGuard {
 public:
  explicit EnvGuard(const char* name) : name_(name) {
    if (const char* v = std::getenv(name)) saved_ = v;
  }
  ~EnvGuard() {
    if (saved_) ::setenv(name_, saved_->c_str(), 1);
    else ::unsetenv(name_);
  }

 private:
  const char* name_;
  std::optional<std::string> saved_;
};

}  // namespace

TEST_CASE("mode rules") {
  CHECK(parse_mode_rule("footprint") == ModeRule::Footprint);
  CHECK(mode_rule_name(parse_mode_rule("sweep")) == "sweep");
  CHECK_THROWS_AS(parse_mode_rule("all"), ConfigError);
}

TEST_CASE("cells expand in sorted order") {
  auto c = small_config();
  c.regimes.push_back(PostselectionRegime::collision_free());
  c.regimes.push_back(PostselectionRegime::allow_bunching());
  const auto cells = expand_cells(c);
  REQUIRE(cells.size() == 6);
  for (std::size_t i = 1; i < cells.size(); ++i) CHECK(cells[i - 1] < cells[i]);
  CHECK(cells[0].key() == "dual_rail/uniform/N=1/m=2/n=1");
  CHECK(cells[5].key() == "unbunched/uniform/N=2/m=4/n=2");
  CHECK(cells[3].parameter_count() == 16);

  auto rail3 = small_config();
  rail3.regimes = {PostselectionRegime::rail_code(3)};
  CHECK(expand_cells(rail3).back().modes == 6);

  auto sweep_rule = small_config();
  sweep_rule.regimes = {PostselectionRegime::collision_free()};
  sweep_rule.mode_rule = ModeRule::Sweep;
  sweep_rule.m_max = 5;
  std::vector<int> modes;
  for (const auto& cell : expand_cells(sweep_rule)) modes.push_back(cell.modes);
  CHECK(modes == std::vector<int>{2, 3, 4, 5, 4, 5});
}

TEST_CASE("invalid sweep configurations") {
  auto check = [](auto mutate) {
    auto c = small_config();
    mutate(c);
    CHECK_THROWS_AS(expand_cells(c), ConfigError);
  };
  check([](SweepConfig& c) { c.regimes.clear(); });
  check([](SweepConfig& c) { c.inits.clear(); });
  check([](SweepConfig& c) { c.n_min = 0; });
  check([](SweepConfig& c) { c.n_max = 0; });
  check([](SweepConfig& c) { c.samples = 1; });
  check([](SweepConfig& c) { c.epsilon = 0.0; });
  check([](SweepConfig& c) { c.max_dim = 2; });
  check([](SweepConfig& c) {
    c.mode_rule = ModeRule::Sweep;
    c.m_max = 3;
  });
  // Rail codes have no freedom in m.
  check([](SweepConfig& c) {
    c.mode_rule = ModeRule::Sweep;
    c.m_max = 5;
  });
}

TEST_CASE("samples are deterministic functions of their key") {
  const auto c = small_config();
  const auto cells = expand_cells(c);
  const auto& cell = cells.back();
  const RVector a = run_sample(c, cell, 3);
  CHECK(a.size() == cell.parameter_count());
  CHECK(run_sample(c, cell, 3) == a);
  CHECK(run_sample(c, cell, 4) != a);

  // Same thing spelled out.
  const LossModel model(cell.modes, cell.photons, cell.regime, default_input(cell.regime, cell.modes, cell.photons));
  Stream ps(c.master_seed, cell.hash(), 3, Purpose::Parameters);
  Stream ts(c.master_seed, cell.hash(), 3, Purpose::Target);
  const auto params = init_uniform(cell.modes, ps);
  const auto target = sample_target(model.outcomes(), ts);
  CHECK(model.evaluate(params, target).gradient == a);
}

TEST_CASE("variance estimator") {
  RVector g(3);
  g << 0.5, -1.0, 2.0;
  CHECK(estimate_variance({g, g, g}).var_mean == 0.0);

  // Two samples g, -g: each component has variance 2 g_mu^2.
  const auto e = estimate_variance({g, RVector(-g)});
  CHECK(std::abs(e.var_mean - 2.0 * g.squaredNorm() / 3.0) < 1e-15);
  CHECK(e.parameters == 3);
  CHECK(e.samples_effective == 2);

  Stream rng(9);
  std::vector<RVector> normal;
  for (int i = 0; i < 4000; ++i) {
    RVector v(4);
    for (int k = 0; k < 4; ++k) v(k) = rng.normal();
    normal.push_back(v);
  }
  Stream boot(10);
  const auto n = estimate_variance(normal, boot);
  CHECK(std::abs(n.var_mean - 1.0) < 0.05);
  // Var of a sample variance of N(0,1) is about 2/(S-1); averaged over 4 components.
  CHECK(n.var_se == doctest::Approx(std::sqrt(2.0 / 3999.0 / 4.0)).epsilon(0.3));

  RVector bad = RVector::Constant(3, std::nan(""));
  CHECK(estimate_variance({g, bad, RVector(-g)}).samples_effective == 2);
  CHECK_THROWS_AS(estimate_variance({g, bad}), InvalidArgument);
  CHECK_THROWS_AS(estimate_variance({g, RVector::Zero(2)}), InvalidArgument);
}

TEST_CASE("single-cell sweep equals the composition of its parts") {
  auto c = small_config();
  c.regimes = {PostselectionRegime::rail_code(2)};
  c.n_min = c.n_max = 2;
  const auto rows = sweep(c);
  REQUIRE(rows.size() == 1);
  const auto& cell = rows[0].cell;
  std::vector<RVector> samples;
  for (int i = 0; i < c.samples; ++i) samples.push_back(run_sample(c, cell, static_cast<std::uint64_t>(i)));
  Stream boot(c.master_seed, cell.hash(), 0, Purpose::Bootstrap);
  const auto e = estimate_variance(samples, boot);
  CHECK(rows[0].estimate.var_mean == e.var_mean);
  CHECK(rows[0].estimate.var_se == e.var_se);
}

TEST_CASE("sweep output is independent of the worker count") {
  const auto dir = std::filesystem::temp_directory_path() / "pvqc_test_harness";
  std::filesystem::create_directories(dir);
  std::string reference;
  for (int workers : {1, 2, 4}) {
    auto c = small_config();
    c.workers = workers;
    c.output = (dir / ("w" + std::to_string(workers) + ".csv")).string();
    sweep(c);
    const auto text = slurp(c.output);
    if (reference.empty()) reference = text;
    CHECK(text == reference);
  }
  CHECK(reference.rfind(std::string(kResultsHeader) + "\n", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("results CSV round trip") {
  auto c = small_config();
  std::ostringstream os;
  os << kResultsHeader << '\n';
  const auto rows = sweep(c);
  for (const auto& r : rows) os << format_results_row(r) << '\n';
  std::istringstream in(os.str());
  const auto records = read_results_csv(in, "mem");
  REQUIRE(records.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(records[i].regime == rows[i].cell.regime.name());
    CHECK(records[i].modes == rows[i].cell.modes);
    CHECK(records[i].var_mean == rows[i].estimate.var_mean);
    CHECK(records[i].var_se == rows[i].estimate.var_se);
  }
}

TEST_CASE("malformed results files name the line") {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      read_results_csv(in, "x.csv");
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  const std::string h = std::string(kResultsHeader) + "\n";
  fails_with("", "x.csv:1");
  fails_with("regime,init\n", "x.csv:1");
  fails_with(h + "fock,uniform,2,4,2,16,10,0.1,0.01,1,1e-12\nfock,uniform,3\n", "x.csv:3");
  fails_with(h + "fock,uniform,two,4,2,16,10,0.1,0.01,1,1e-12\n", "x.csv:2");
}

TEST_CASE("worker resolution") {
  EnvGuard guard("PVQC_WORKERS");
  ::unsetenv("PVQC_WORKERS");
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(0) >= 1);
  ::setenv("PVQC_WORKERS", "5", 1);
  CHECK(resolve_workers(0) == 5);
  CHECK(resolve_workers(2) == 2);
  ::setenv("PVQC_WORKERS", "lots", 1);
  CHECK_THROWS_AS(resolve_workers(0), ConfigError);
  ::setenv("PVQC_WORKERS", "0", 1);
  CHECK_THROWS_AS(resolve_workers(0), ConfigError);
}

TEST_CASE("parallel_for covers every index once and propagates errors") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(50, 3,
                               [](std::size_t i) {
                                 if (i == 17) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  parallel_for(0, 2, [](std::size_t) { FAIL("called"); });
}

TEST_CASE("default gradcheck cases") {
  const auto cases = default_gradcheck_cases(1, 30);
  REQUIRE(cases.size() == 30);
  int per_regime[3] = {0, 0, 0};
  for (const auto& c : cases) {
    CHECK(c.modes <= 8);
    CHECK_NOTHROW(c.regime.validate(c.modes, c.photons));
    if (c.regime == PostselectionRegime::allow_bunching()) ++per_regime[0];
    if (c.regime == PostselectionRegime::collision_free()) ++per_regime[1];
    if (c.regime == PostselectionRegime::rail_code(2)) ++per_regime[2];
  }
  CHECK(per_regime[0] == 10);
  CHECK(per_regime[1] == 10);
  CHECK(per_regime[2] == 10);
  CHECK(default_gradcheck_cases(1, 30)[7].seed == cases[7].seed);
}
