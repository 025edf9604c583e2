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

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "pvqc/common.hpp"
#include "pvqc/config.hpp"
#include "pvqc/fit.hpp"
#include "pvqc/fock.hpp"
#include "pvqc/harness.hpp"
#include "pvqc/liealg.hpp"
#include "pvqc/mesh.hpp"

namespace pvqc::cli {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Short form for probabilities that are exact up to rounding: 0.5, 0.0.
std::string fmt_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", std::abs(x) < 1e-15 ? 0.0 : x);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

KeyValues load(const ConfigSource& src) {
  KeyValues kv = src.path.empty() ? KeyValues{} : KeyValues::parse_file(src.path);
  for (const auto& o : src.overrides) kv.set(o);
  return kv;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
  if (!f) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace

int cmd_basis(int modes, int photons, std::size_t list_limit, std::ostream& out) {
  if (modes < 1) throw ConfigError("basis: modes must be at least 1");
  if (photons < 0) throw ConfigError("basis: photons must be non-negative");
  const auto dim = sector_dimension(modes, photons);
  out << "dim=" << dim << '\n';
  if (dim > kDefaultMaxDim) return kExitOk;
  const FockBasis basis(modes, photons);
  if (basis.size() <= list_limit) {
    for (const auto& s : basis.states()) out << s.to_string() << '\n';
  } else {
    out << "first=" << basis.states().front().to_string() << '\n';
    out << "last=" << basis.states().back().to_string() << '\n';
  }
  return kExitOk;
}

int cmd_hom(std::ostream& out) {
  auto p = MeshParams::zeros(2);
  p[0] = kPi / 4.0;  // balanced beam splitter
  const FockBasis basis(2, 2);
  const CVector psi = evolve_state(build_unitary(p), OccupationVector{1, 1}, basis);
  const double expected[] = {0.5, 0.0, 0.5};  // (2,0), (1,1), (0,2)
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double prob = std::norm(psi(static_cast<Eigen::Index>(i)));
    worst = std::max(worst, std::abs(prob - expected[i]));
    out << "p" << basis[i].to_string() << "=" << fmt_short(prob) << '\n';
  }
  out << "max_deviation=" << fmt17(worst) << '\n';
  if (worst > 1e-10) {
    out << "FAIL\n";
    return kExitCheckFailed;
  }
  out << "PASS\n";
  return kExitOk;
}

int cmd_purity(const ConfigSource& src, std::ostream& out) {
  const PurityConfig c = purity_config_from(load(src));
  std::ostringstream csv;
  csv << "regime,m,n,subspace_dim,purity\n";
  for (const auto& regime : c.regimes) {
    for (std::size_t i = 0; i < c.modes.size(); ++i) {
      const int m = c.modes[i];
      const int n = c.photons.empty() ? m / 2 : c.photons[i];
      regime.validate(m, n);
      const FockBasis basis(m, n);
      const auto o = reference_observable(c.observable, regime, basis);
      const auto report = g_purity(o, regime, basis, c.algebra);
      csv << report.regime << ',' << m << ',' << n << ',' << report.subspace_dim << ',' << fmt17(report.purity)
          << '\n';
    }
  }
  if (c.output.empty()) {
    out << csv.str();
  } else {
    write_file(c.output, csv.str());
    write_file(c.output + ".resolved.cfg", render_purity_config(c));
    out << "wrote " << c.output << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const ConfigSource& src, std::optional<int> workers, std::ostream& out) {
  SweepConfig c = sweep_config_from(load(src));
  if (workers) {
    c.workers = *workers;
  } else if (std::getenv("PVQC_WORKERS")) {
    c.workers = resolve_workers(0);
  }
  expand_cells(c);  // reject infeasible grids before touching the output
  write_file(c.output + ".resolved.cfg", render_sweep_config(c));
  const auto rows = sweep(c);
  out << "wrote " << rows.size() << " rows to " << c.output << '\n';
  return kExitOk;
}

int cmd_fit(const std::string& results_path, const std::vector<std::string>& models, const std::string& output,
            std::ostream& out) {
  std::ifstream in(results_path);
  if (!in) throw ConfigError("cannot open results file '" + results_path + "'");
  const auto records = read_results_csv(in, results_path);

  std::vector<FitModel> chosen;
  for (const auto& name : models) chosen.push_back(parse_fit_model(name));
  if (chosen.empty()) chosen = {FitModel::Exponential, FitModel::Power, FitModel::CubicLog};

  // Curves are V against N per (regime, init). When a curve repeats an N
  // (a mode-count sweep), it is split per N and fitted against m instead.
  std::map<std::pair<std::string, std::string>, std::vector<const ResultRecord*>> by_curve;
  for (const auto& r : records) by_curve[{r.regime, r.init}].push_back(&r);

  std::vector<std::pair<std::string, std::vector<ScalingPoint>>> groups;
  for (const auto& [key, rows] : by_curve) {
    std::map<int, std::vector<const ResultRecord*>> per_n;
    for (const auto* r : rows) per_n[r->logical_units].push_back(r);
    const std::string label = key.first + " " + key.second;
    if (per_n.size() == rows.size()) {
      std::vector<ScalingPoint> pts;
      for (const auto* r : rows) pts.emplace_back(static_cast<double>(r->logical_units), r->var_mean);
      groups.emplace_back(label + " x=N", std::move(pts));
    } else {
      for (const auto& [n, sub] : per_n) {
        std::vector<ScalingPoint> pts;
        for (const auto* r : sub) pts.emplace_back(static_cast<double>(r->modes), r->var_mean);
        groups.emplace_back(label + " N=" + std::to_string(n) + " x=m", std::move(pts));
      }
    }
  }

  std::ostringstream report;
  for (const auto& [label, points] : groups) {
    report << "[" << label << "]\n";
    std::optional<FitReport> best;
    for (auto model : chosen) {
      try {
        const auto fit = fit_scaling(points, model);
        report << format_fit_report(fit);
        if (!best || fit.aic < best->aic) best = fit;
      } catch (const InvalidArgument& e) {
        report << "model: " << fit_model_name(model) << "\nskipped: " << e.what() << '\n';
      }
    }
    if (best) report << "preferred_aic: " << fit_model_name(best->model) << '\n';
    report << '\n';
  }

  if (output.empty()) {
    out << report.str();
  } else {
    write_file(output, report.str());
    out << "wrote " << output << '\n';
  }
  return kExitOk;
}

int cmd_gradcheck(const ConfigSource& src, std::ostream& out) {
  const GradcheckConfig c = gradcheck_config_from(load(src));
  double worst = 0.0;
  int failures = 0;
  for (const auto& gc : default_gradcheck_cases(c.seed, c.cases)) {
    const auto r = run_gradcheck(gc, c.settings);
    const bool ok = r.max_scaled_error <= c.settings.rel_tol;
    if (!ok) ++failures;
    worst = std::max(worst, r.max_scaled_error);
    out << (ok ? "ok   " : "FAIL ") << gc.regime.name() << " m=" << gc.modes << " n=" << gc.photons
        << " init=" << initializer_name(gc.init) << " rel_err=" << fmt17(r.max_scaled_error)
        << " abs_err=" << fmt17(r.max_abs_error) << '\n';
  }
  out << "max_rel_err=" << fmt17(worst) << '\n';
  if (failures > 0) {
    out << failures << " of " << c.cases << " configurations exceeded tolerance\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

}  // namespace pvqc::cli
