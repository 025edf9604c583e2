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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pvqc/ensembles.hpp"
#include "pvqc/fit.hpp"
#include "pvqc/loss.hpp"
#include "pvqc/postselect.hpp"

namespace pvqc {

enum class ModeRule {
  Footprint,  // m = r N for rail codes, m = 2N otherwise; n = N
  Sweep,      // n = N fixed, m = 2N .. m_max (non-code regimes only)
};

ModeRule parse_mode_rule(std::string_view name);
std::string mode_rule_name(ModeRule rule);

inline constexpr std::uint64_t kDefaultMaxDim = 50000;
inline constexpr int kBootstrapResamples = 200;

struct SweepConfig {
  std::vector<PostselectionRegime> regimes;
  std::vector<Initializer> inits;
  int n_min = 0;
  int n_max = 0;
  ModeRule mode_rule = ModeRule::Footprint;
  int m_max = 0;
  int samples = 0;
  std::uint64_t master_seed = 0;
  double epsilon = kDefaultFloor;
  std::string output;
  std::uint64_t max_dim = kDefaultMaxDim;
  int workers = 0;  // 0: hardware concurrency
};

/// One (regime, init, N, m, n) point of a sweep.
struct Cell {
  PostselectionRegime regime;
  Initializer init;
  int logical_units;
  int modes;
  int photons;

  std::string key() const;
  std::uint64_t hash() const { return stable_hash(key()); }
  int parameter_count() const { return modes * modes; }
};

bool operator<(const Cell& a, const Cell& b);

/// Expands and validates every cell, sorted by key. Throws ConfigError for
/// infeasible cells or sectors above max_dim, before any computation.
std::vector<Cell> expand_cells(const SweepConfig& config);

/// Gradient for one sample: parameters and target come from the sample's
/// own substreams, so the result depends only on (seed, cell, index).
RVector run_sample(const SweepConfig& config, const Cell& cell, std::uint64_t sample_index);
RVector run_sample(const LossModel& model, const Cell& cell, std::uint64_t master_seed,
                   std::uint64_t sample_index);

struct VarianceEstimate {
  double var_mean = 0.0;  // (1/P) sum_mu Var_s[g_mu], denominator S - 1
  double var_se = 0.0;    // bootstrap standard error
  int parameters = 0;
  std::size_t samples_effective = 0;
};

/// Non-finite samples are dropped before estimating. Needs >= 2 samples.
VarianceEstimate estimate_variance(const std::vector<RVector>& samples, Stream& bootstrap,
                                   int resamples = kBootstrapResamples);
/// Bootstrap substream derived from (seed 0, key 0); for ad-hoc use.
VarianceEstimate estimate_variance(const std::vector<RVector>& samples);

struct SweepRow {
  Cell cell;
  VarianceEstimate estimate;
  std::uint64_t master_seed;
  double epsilon;
};

inline constexpr const char* kResultsHeader = "regime,init,N,m,n,P,S,var_mean,var_se,master_seed,epsilon";

std::string format_results_row(const SweepRow& row);

/// Runs all cells in key order. Samples within a cell are spread over the
/// worker pool; each row is appended and flushed to config.output (when
/// set) as soon as its cell finishes.
std::vector<SweepRow> sweep(const SweepConfig& config);

/// Resolved worker count: explicit value, then PVQC_WORKERS, then hardware.
int resolve_workers(int requested);

/// Calls body(i) for i in [0, count) across `workers` threads.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

/// One row of a results CSV as read back for fitting.
struct ResultRecord {
  std::string regime;
  std::string init;
  int logical_units;
  int modes;
  int photons;
  double var_mean;
  double var_se;
};

/// Parses a results CSV; errors carry the offending line number.
std::vector<ResultRecord> read_results_csv(std::istream& in, const std::string& source);

// Finite-difference verification of the analytic gradient.

struct GradcheckCase {
  PostselectionRegime regime;
  int modes;
  int photons;
  Initializer init;
  std::uint64_t seed;
};

struct GradcheckOutcome {
  GradcheckCase config;
  double max_scaled_error;  // max_k |g_k - fd_k| / max(|fd_k|, abs_tol / rel_tol)
  double max_abs_error;
};

struct GradcheckSettings {
  double step = 1e-5;  // base step of the extrapolated central difference
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
};

/// Draws below this retained probability are too close to a zero of an
/// amplitude for central differences to be meaningful.
inline constexpr double kGradcheckMinProbability = 1e-8;

/// Parameters and target for a case, from its own seed.
std::pair<MeshParams, TargetDistribution> gradcheck_point(const LossModel& model, const GradcheckCase& c);

/// 30 seeded cases over fock, unbunched and dual_rail with m <= 8, n <= 4.
/// Case seeds are redrawn until every retained p_x is at least
/// kGradcheckMinProbability.
std::vector<GradcheckCase> default_gradcheck_cases(std::uint64_t seed, int count = 30);
GradcheckOutcome run_gradcheck(const GradcheckCase& c, const GradcheckSettings& settings);

}  // namespace pvqc
