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

#include "pvqc/fit.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "pvqc/common.hpp"

namespace pvqc {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

FitModel parse_fit_model(std::string_view name) {
  if (name == "exponential") return FitModel::Exponential;
  if (name == "power") return FitModel::Power;
  if (name == "cubic_log") return FitModel::CubicLog;
  throw ConfigError("unknown fit model '" + std::string(name) + "' (expected exponential, power or cubic_log)");
}

std::string fit_model_name(FitModel model) {
  switch (model) {
    case FitModel::Exponential: return "exponential";
    case FitModel::Power: return "power";
    case FitModel::CubicLog: return "cubic_log";
  }
  return "";
}

std::vector<std::string> fit_coefficient_names(FitModel model) {
  switch (model) {
    case FitModel::Exponential: return {"C", "a"};
    case FitModel::Power: return {"C", "c"};
    case FitModel::CubicLog: return {"b0", "b1", "b2", "b3"};
  }
  return {};
}

FitReport fit_scaling(const std::vector<ScalingPoint>& points, FitModel model) {
  const std::size_t needed = model == FitModel::CubicLog ? 5 : 3;
  if (points.size() < needed)
    throw InvalidArgument("fit_scaling: " + fit_model_name(model) + " needs at least " + std::to_string(needed) +
                          " points, got " + std::to_string(points.size()));
  for (const auto& [n, v] : points) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("fit_scaling: non-positive variance");
    if (model == FitModel::Power && !(n > 0.0)) throw InvalidArgument("fit_scaling: power law needs N > 0");
  }

  const auto rows = static_cast<Eigen::Index>(points.size());
  const Eigen::Index cols = model == FitModel::CubicLog ? 4 : 2;
  RMatrix x(rows, cols);
  RVector y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto [n, v] = points[static_cast<std::size_t>(i)];
    switch (model) {
      case FitModel::Exponential:
        x(i, 0) = 1.0;
        x(i, 1) = n;
        y(i) = std::log(v);
        break;
      case FitModel::Power:
        x(i, 0) = 1.0;
        x(i, 1) = std::log(n);
        y(i) = std::log(v);
        break;
      case FitModel::CubicLog:
        for (Eigen::Index c = 0; c < 4; ++c) x(i, c) = std::pow(n, static_cast<double>(c));
        y(i) = std::log10(v);
        break;
    }
  }

  const RVector beta = x.colPivHouseholderQr().solve(y);
  const double rss = (y - x * beta).squaredNorm();
  const double tss = (y.array() - y.mean()).square().sum();
  const double n = static_cast<double>(rows);

  FitReport out;
  out.model = model;
  out.points = points.size();
  out.r_squared = tss > 0.0 ? 1.0 - rss / tss : (rss == 0.0 ? 1.0 : 0.0);
  // An exact fit has RSS = 0; floor the mean residual so AIC stays finite.
  out.aic = 2.0 * static_cast<double>(cols) + n * std::log(std::max(rss / n, std::numeric_limits<double>::min()));
  switch (model) {
    case FitModel::Exponential:
    case FitModel::Power:
      out.coefficients = {std::exp(beta(0)), -beta(1)};
      break;
    case FitModel::CubicLog:
      out.coefficients = {beta(0), beta(1), beta(2), beta(3)};
      break;
  }
  return out;
}

std::string format_fit_report(const FitReport& report) {
  std::ostringstream os;
  os << "model: " << fit_model_name(report.model) << '\n';
  const auto names = fit_coefficient_names(report.model);
  for (std::size_t i = 0; i < names.size(); ++i) os << names[i] << ": " << fmt17(report.coefficients[i]) << '\n';
  os << "r_squared: " << fmt17(report.r_squared) << '\n';
  os << "aic: " << fmt17(report.aic) << '\n';
  os << "points: " << report.points << '\n';
  return os.str();
}

}  // namespace pvqc
