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

#include "pvqc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <thread>
#include <tuple>

namespace pvqc {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double mean_component_variance(const RMatrix& x, const std::vector<std::size_t>& rows) {
  const auto s = static_cast<double>(rows.size());
  RVector mean = RVector::Zero(x.cols());
  for (auto r : rows) mean += x.row(static_cast<Eigen::Index>(r)).transpose();
  mean /= s;
  RVector ss = RVector::Zero(x.cols());
  for (auto r : rows) ss += (x.row(static_cast<Eigen::Index>(r)).transpose() - mean).array().square().matrix();
  return (ss / (s - 1.0)).mean();
}

template <typename T>
T parse_number(std::string_view field, const std::string& where) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ConfigError(where + ": cannot parse '" + std::string(field) + "' as a number");
  return value;
}

}  // namespace

ModeRule parse_mode_rule(std::string_view name) {
  if (name == "footprint") return ModeRule::Footprint;
  if (name == "sweep") return ModeRule::Sweep;
  throw ConfigError("unknown mode_rule '" + std::string(name) + "' (expected footprint or sweep)");
}

std::string mode_rule_name(ModeRule rule) { return rule == ModeRule::Footprint ? "footprint" : "sweep"; }

std::string Cell::key() const {
  return regime.name() + "/" + initializer_name(init) + "/N=" + std::to_string(logical_units) +
         "/m=" + std::to_string(modes) + "/n=" + std::to_string(photons);
}

bool operator<(const Cell& a, const Cell& b) {
  return std::make_tuple(a.regime.name(), initializer_name(a.init), a.logical_units, a.modes, a.photons) <
         std::make_tuple(b.regime.name(), initializer_name(b.init), b.logical_units, b.modes, b.photons);
}

std::vector<Cell> expand_cells(const SweepConfig& config) {
  if (config.regimes.empty()) throw ConfigError("sweep: no regimes given");
  if (config.inits.empty()) throw ConfigError("sweep: no initializers given");
  if (config.n_min < 1 || config.n_max < config.n_min)
    throw ConfigError("sweep: N range [" + std::to_string(config.n_min) + ", " + std::to_string(config.n_max) +
                      "] is empty or starts below 1");
  if (config.samples < 2) throw ConfigError("sweep: need at least 2 samples per cell");
  if (!(config.epsilon > 0.0)) throw ConfigError("sweep: epsilon must be positive");

  std::vector<Cell> cells;
  for (const auto& regime : config.regimes) {
    for (auto init : config.inits) {
      for (int n = config.n_min; n <= config.n_max; ++n) {
        std::vector<int> modes;
        if (config.mode_rule == ModeRule::Footprint) {
          modes.push_back(regime.kind() == RegimeKind::RailCode ? regime.rails() * n : 2 * n);
        } else {
          if (config.m_max < 2 * n)
            throw ConfigError("sweep: m_max=" + std::to_string(config.m_max) + " is below 2N=" + std::to_string(2 * n));
          for (int m = 2 * n; m <= config.m_max; ++m) modes.push_back(m);
        }
        for (int m : modes) {
          regime.validate(m, n);
          const auto dim = sector_dimension(m, n);
          if (dim > config.max_dim)
            throw ConfigError("sweep: cell " + regime.name() + " m=" + std::to_string(m) + " n=" + std::to_string(n) +
                              " has sector dimension " + std::to_string(dim) + " above max_dim=" +
                              std::to_string(config.max_dim));
          cells.push_back(Cell{regime, init, n, m, n});
        }
      }
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.key() == b.key(); }),
              cells.end());
  return cells;
}

RVector run_sample(const LossModel& model, const Cell& cell, std::uint64_t master_seed,
                   std::uint64_t sample_index) {
  Stream params_stream(master_seed, cell.hash(), sample_index, Purpose::Parameters);
  const MeshParams params = initialize(cell.init, cell.modes, params_stream);
  Stream target_stream(master_seed, cell.hash(), sample_index, Purpose::Target);
  const TargetDistribution target = sample_target(model.outcomes(), target_stream);
  return model.evaluate(params, target).gradient;
}

RVector run_sample(const SweepConfig& config, const Cell& cell, std::uint64_t sample_index) {
  const LossModel model(cell.modes, cell.photons, cell.regime, default_input(cell.regime, cell.modes, cell.photons),
                        config.epsilon);
  return run_sample(model, cell, config.master_seed, sample_index);
}

VarianceEstimate estimate_variance(const std::vector<RVector>& samples, Stream& bootstrap, int resamples) {
  std::vector<const RVector*> kept;
  for (const auto& g : samples)
    if (g.allFinite()) kept.push_back(&g);
  if (kept.size() < 2) throw InvalidArgument("estimate_variance: need at least 2 finite samples");
  const auto p = kept.front()->size();
  if (p == 0) throw InvalidArgument("estimate_variance: empty gradient vectors");

  RMatrix x(static_cast<Eigen::Index>(kept.size()), p);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i]->size() != p) throw InvalidArgument("estimate_variance: gradient lengths differ");
    x.row(static_cast<Eigen::Index>(i)) = kept[i]->transpose();
  }

  std::vector<std::size_t> rows(kept.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;

  VarianceEstimate out;
  out.var_mean = mean_component_variance(x, rows);
  out.parameters = static_cast<int>(p);
  out.samples_effective = kept.size();

  if (resamples >= 2) {
    std::vector<double> boot(static_cast<std::size_t>(resamples));
    for (auto& b : boot) {
      for (auto& r : rows) r = static_cast<std::size_t>(bootstrap.below(kept.size()));
      b = mean_component_variance(x, rows);
    }
    double mean = 0.0;
    for (double b : boot) mean += b;
    mean /= static_cast<double>(boot.size());
    double ss = 0.0;
    for (double b : boot) ss += (b - mean) * (b - mean);
    out.var_se = std::sqrt(ss / static_cast<double>(boot.size() - 1));
  }
  return out;
}

VarianceEstimate estimate_variance(const std::vector<RVector>& samples) {
  Stream bootstrap(0, 0, 0, Purpose::Bootstrap);
  return estimate_variance(samples, bootstrap);
}

std::string format_results_row(const SweepRow& row) {
  const auto& c = row.cell;
  return c.regime.name() + "," + initializer_name(c.init) + "," + std::to_string(c.logical_units) + "," +
         std::to_string(c.modes) + "," + std::to_string(c.photons) + "," + std::to_string(row.estimate.parameters) +
         "," + std::to_string(row.estimate.samples_effective) + "," + fmt17(row.estimate.var_mean) + "," +
         fmt17(row.estimate.var_se) + "," + std::to_string(row.master_seed) + "," + fmt17(row.epsilon);
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PVQC_WORKERS")) {
    int value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 1)
      throw ConfigError("PVQC_WORKERS must be a positive integer, got '" + std::string(text) + "'");
    return value;
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SweepRow> sweep(const SweepConfig& config) {
  const auto cells = expand_cells(config);
  const int workers = resolve_workers(config.workers);

  std::ofstream out;
  if (!config.output.empty()) {
    out.open(config.output, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + config.output + "'");
    out << kResultsHeader << '\n' << std::flush;
  }

  std::vector<SweepRow> rows;
  rows.reserve(cells.size());
  for (const auto& cell : cells) {
    const LossModel model(cell.modes, cell.photons, cell.regime,
                          default_input(cell.regime, cell.modes, cell.photons), config.epsilon);
    std::vector<RVector> samples(static_cast<std::size_t>(config.samples));
    parallel_for(samples.size(), workers, [&](std::size_t i) {
      samples[i] = run_sample(model, cell, config.master_seed, i);
    });
    Stream bootstrap(config.master_seed, cell.hash(), 0, Purpose::Bootstrap);
    rows.push_back(SweepRow{cell, estimate_variance(samples, bootstrap), config.master_seed, config.epsilon});
    if (out.is_open()) out << format_results_row(rows.back()) << '\n' << std::flush;
  }
  return rows;
}

std::vector<ResultRecord> read_results_csv(std::istream& in, const std::string& source) {
  std::vector<ResultRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = source + ":" + std::to_string(line_no);
    if (!header_seen) {
      if (line != kResultsHeader) throw ConfigError(where + ": expected header '" + std::string(kResultsHeader) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 11)
      throw ConfigError(where + ": expected 11 fields, found " + std::to_string(fields.size()));
    ResultRecord r;
    r.regime = std::string(fields[0]);
    r.init = std::string(fields[1]);
    r.logical_units = parse_number<int>(fields[2], where);
    r.modes = parse_number<int>(fields[3], where);
    r.photons = parse_number<int>(fields[4], where);
    r.var_mean = parse_number<double>(fields[7], where);
    r.var_se = parse_number<double>(fields[8], where);
    out.push_back(std::move(r));
  }
  if (!header_seen) throw ConfigError(source + ":1: empty results file");
  return out;
}

// ---------------------------------------------------------------------------
// Gradient check

std::pair<MeshParams, TargetDistribution> gradcheck_point(const LossModel& model, const GradcheckCase& c) {
  Stream params_stream(c.seed, 0, 0, Purpose::Parameters);
  MeshParams params = initialize(c.init, c.modes, params_stream);
  Stream target_stream(c.seed, 0, 0, Purpose::Target);
  return {std::move(params), sample_target(model.outcomes(), target_stream)};
}

std::vector<GradcheckCase> default_gradcheck_cases(std::uint64_t seed, int count) {
  struct Size { int m, n; };
  const std::vector<Size> fock = {{2, 1}, {3, 2}, {4, 2}, {5, 2}, {4, 3}, {6, 3}, {8, 2}, {5, 4}, {7, 3}, {8, 4}};
  const std::vector<Size> unbunched = {{2, 1}, {3, 2}, {4, 2}, {5, 3}, {6, 2}, {6, 3}, {7, 4}, {8, 3}, {8, 4}, {5, 2}};
  const std::vector<Size> dual = {{2, 1}, {4, 2}, {6, 3}, {8, 4}};
  const Initializer inits[] = {Initializer::Uniform, Initializer::Beta, Initializer::Haar};

  std::vector<GradcheckCase> out;
  for (int i = 0; i < count; ++i) {
    const int round = i / 3;
    Size size{};
    PostselectionRegime regime = PostselectionRegime::allow_bunching();
    switch (i % 3) {
      case 0: size = fock[static_cast<std::size_t>(round) % fock.size()]; break;
      case 1:
        regime = PostselectionRegime::collision_free();
        size = unbunched[static_cast<std::size_t>(round) % unbunched.size()];
        break;
      default:
        regime = PostselectionRegime::rail_code(2);
        size = dual[static_cast<std::size_t>(round) % dual.size()];
        break;
    }
    GradcheckCase c{regime, size.m, size.n, inits[round % 3], 0};
    const LossModel model(c.modes, c.photons, c.regime, default_input(c.regime, c.modes, c.photons));
    // Central differences only verify smooth points; sqrt(p_x) has a kink
    // wherever an amplitude vanishes, so skip draws sitting next to one.
    for (int attempt = 0;; ++attempt) {
      c.seed = stable_hash("gradcheck/" + std::to_string(seed) + "/" + std::to_string(i) + "/" +
                           std::to_string(attempt));
      const auto [params, target] = gradcheck_point(model, c);
      if (model.distribution(params).p.minCoeff() >= kGradcheckMinProbability) break;
    }
    out.push_back(c);
  }
  return out;
}

GradcheckOutcome run_gradcheck(const GradcheckCase& c, const GradcheckSettings& settings) {
  const LossModel model(c.modes, c.photons, c.regime, default_input(c.regime, c.modes, c.photons));
  const auto [params, target] = gradcheck_point(model, c);

  const RVector analytic = model.evaluate(params, target).gradient;
  const double floor = settings.abs_tol / settings.rel_tol;
  GradcheckOutcome out{c, 0.0, 0.0};
  auto central = [&](int k, double h) {
    MeshParams plus = params, minus = params;
    plus[k] += h;
    minus[k] -= h;
    return (model.loss(plus, target) - model.loss(minus, target)) / (2.0 * h);
  };
  for (int k = 0; k < params.size(); ++k) {
    // Richardson extrapolation of steps h and h/2 cancels the O(h^2) term.
    const double fd = (4.0 * central(k, 0.5 * settings.step) - central(k, settings.step)) / 3.0;
    const double err = std::abs(analytic(k) - fd);
    out.max_abs_error = std::max(out.max_abs_error, err);
    out.max_scaled_error = std::max(out.max_scaled_error, err / std::max(std::abs(fd), floor));
  }
  return out;
}

}  // namespace pvqc
