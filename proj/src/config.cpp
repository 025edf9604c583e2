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

#include "pvqc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "pvqc/common.hpp"

namespace pvqc {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& items, const auto& name) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + name(items[i]);
  return out;
}

int as_int(long long v, const std::string& key, long long lo, long long hi) {
  if (v < lo || v > hi)
    throw ConfigError(key + " = " + std::to_string(v) + " is outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return static_cast<int>(v);
}

}  // namespace

KeyValues KeyValues::parse(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (kv.has(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    kv.set(key, value, where);
  }
  return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in, path);
}

void KeyValues::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key=value");
  const std::string key = trim(std::string_view(assignment).substr(0, eq));
  if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
  set(key, trim(std::string_view(assignment).substr(eq + 1)), "--set");
}

void KeyValues::set(const std::string& key, const std::string& value, const std::string& origin) {
  entries_[key] = Entry{value, origin};
}

void KeyValues::reject_unknown(const std::set<std::string>& allowed) const {
  for (const auto& [key, entry] : entries_) {
    if (allowed.count(key)) continue;
    std::string names;
    for (const auto& a : allowed) names += (names.empty() ? "" : ", ") + a;
    throw ConfigError(entry.origin + ": unknown key '" + key + "' (allowed: " + names + ")");
  }
}

const KeyValues::Entry& KeyValues::at(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

std::string KeyValues::get_string(const std::string& key) const {
  const auto& e = at(key);
  if (e.value.empty()) throw ConfigError(e.origin + ": '" + key + "' is empty");
  return e.value;
}

std::vector<std::string> KeyValues::get_list(const std::string& key) const {
  const auto& e = at(key);
  std::vector<std::string> out;
  std::string_view rest(e.value);
  for (;;) {
    const auto comma = rest.find(',');
    std::string item = trim(rest.substr(0, comma));
    if (item.empty()) throw ConfigError(e.origin + ": '" + key + "' has an empty list item");
    out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

long long KeyValues::get_int(const std::string& key) const {
  const auto& e = at(key);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc() || ptr != e.value.data() + e.value.size())
    throw ConfigError(e.origin + ": '" + key + "' must be an integer, got '" + e.value + "'");
  return v;
}

std::uint64_t KeyValues::get_uint64(const std::string& key) const {
  const auto& e = at(key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc() || ptr != e.value.data() + e.value.size())
    throw ConfigError(e.origin + ": '" + key + "' must be a non-negative integer, got '" + e.value + "'");
  return v;
}

double KeyValues::get_double(const std::string& key) const {
  const auto& e = at(key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc() || ptr != e.value.data() + e.value.size() || !std::isfinite(v))
    throw ConfigError(e.origin + ": '" + key + "' must be a finite number, got '" + e.value + "'");
  return v;
}

// ---------------------------------------------------------------------------

SweepConfig sweep_config_from(const KeyValues& kv) {
  kv.reject_unknown({"regimes", "inits", "N_min", "N_max", "mode_rule", "m_max", "samples", "seed", "epsilon",
                     "output", "max_dim", "workers"});
  constexpr long long kIntMax = std::numeric_limits<int>::max();
  SweepConfig c;
  for (const auto& r : kv.get_list("regimes")) c.regimes.push_back(PostselectionRegime::parse(r));
  for (const auto& i : kv.get_list("inits")) c.inits.push_back(parse_initializer(i));
  c.n_min = as_int(kv.get_int("N_min"), "N_min", 1, 64);
  c.n_max = as_int(kv.get_int("N_max"), "N_max", 1, 64);
  if (kv.has("mode_rule")) c.mode_rule = parse_mode_rule(kv.get_string("mode_rule"));
  if (kv.has("m_max")) c.m_max = as_int(kv.get_int("m_max"), "m_max", 2, 128);
  if (c.mode_rule == ModeRule::Sweep && !kv.has("m_max")) throw ConfigError("mode_rule = sweep requires m_max");
  c.samples = as_int(kv.get_int("samples"), "samples", 2, kIntMax);
  c.master_seed = kv.get_uint64("seed");
  if (kv.has("epsilon")) c.epsilon = kv.get_double("epsilon");
  if (!(c.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  c.output = kv.get_string("output");
  if (kv.has("max_dim")) c.max_dim = kv.get_uint64("max_dim");
  if (kv.has("workers")) c.workers = as_int(kv.get_int("workers"), "workers", 0, 4096);
  return c;
}

std::string render_sweep_config(const SweepConfig& c) {
  std::ostringstream os;
  os << "regimes = " << join(c.regimes, [](const PostselectionRegime& r) { return r.name(); }) << '\n'
     << "inits = " << join(c.inits, [](Initializer i) { return initializer_name(i); }) << '\n'
     << "N_min = " << c.n_min << '\n'
     << "N_max = " << c.n_max << '\n'
     << "mode_rule = " << mode_rule_name(c.mode_rule) << '\n';
  if (c.mode_rule == ModeRule::Sweep) os << "m_max = " << c.m_max << '\n';
  os << "samples = " << c.samples << '\n'
     << "seed = " << c.master_seed << '\n'
     << "epsilon = " << fmt17(c.epsilon) << '\n'
     << "output = " << c.output << '\n'
     << "max_dim = " << c.max_dim << '\n'
     << "workers = " << resolve_workers(c.workers) << '\n'
     << "# floor placement: s < epsilon is replaced by epsilon; individual p_x are not floored\n"
     << "# gradient cutoff: outcomes with p_x < " << fmt17(kGradientCutoff) << " drop out of the gradient sum\n"
     << "# targets: flat Dirichlet over the retained outcomes, one per sample\n";
  return os.str();
}

PurityConfig purity_config_from(const KeyValues& kv) {
  kv.reject_unknown({"regimes", "m", "n", "observable", "algebra", "output"});
  PurityConfig c;
  for (const auto& r : kv.get_list("regimes")) c.regimes.push_back(PostselectionRegime::parse(r));
  for (const auto& m : kv.get_list("m")) {
    KeyValues one;
    one.set("m", m, "m");
    c.modes.push_back(as_int(one.get_int("m"), "m", 1, 64));
  }
  if (kv.has("n")) {
    for (const auto& n : kv.get_list("n")) {
      KeyValues one;
      one.set("n", n, "n");
      c.photons.push_back(as_int(one.get_int("n"), "n", 0, 64));
    }
    if (c.photons.size() != c.modes.size()) throw ConfigError("'n' must list one photon number per entry of 'm'");
  }
  if (kv.has("observable")) c.observable = parse_reference_observable(kv.get_string("observable"));
  if (kv.has("algebra")) c.algebra = parse_algebra(kv.get_string("algebra"));
  if (kv.has("output")) c.output = kv.get_string("output");
  return c;
}

std::string render_purity_config(const PurityConfig& c) {
  std::ostringstream os;
  os << "regimes = " << join(c.regimes, [](const PostselectionRegime& r) { return r.name(); }) << '\n'
     << "m = " << join(c.modes, [](int m) { return std::to_string(m); }) << '\n';
  if (!c.photons.empty()) os << "n = " << join(c.photons, [](int n) { return std::to_string(n); }) << '\n';
  os << "observable = " << reference_observable_name(c.observable) << '\n'
     << "algebra = " << algebra_name(c.algebra) << '\n';
  if (!c.output.empty()) os << "output = " << c.output << '\n';
  return os.str();
}

GradcheckConfig gradcheck_config_from(const KeyValues& kv) {
  kv.reject_unknown({"configs", "seed", "step", "tolerance", "abs_tolerance"});
  GradcheckConfig c;
  if (kv.has("configs")) c.cases = as_int(kv.get_int("configs"), "configs", 1, 100000);
  if (kv.has("seed")) c.seed = kv.get_uint64("seed");
  if (kv.has("step")) c.settings.step = kv.get_double("step");
  if (kv.has("tolerance")) c.settings.rel_tol = kv.get_double("tolerance");
  if (kv.has("abs_tolerance")) c.settings.abs_tol = kv.get_double("abs_tolerance");
  if (!(c.settings.step > 0.0) || !(c.settings.rel_tol > 0.0) || !(c.settings.abs_tol > 0.0))
    throw ConfigError("step, tolerance and abs_tolerance must be positive");
  return c;
}

std::string render_gradcheck_config(const GradcheckConfig& c) {
  std::ostringstream os;
  os << "configs = " << c.cases << '\n'
     << "seed = " << c.seed << '\n'
     << "step = " << fmt17(c.settings.step) << '\n'
     << "tolerance = " << fmt17(c.settings.rel_tol) << '\n'
     << "abs_tolerance = " << fmt17(c.settings.abs_tol) << '\n';
  return os.str();
}

}  // namespace pvqc
