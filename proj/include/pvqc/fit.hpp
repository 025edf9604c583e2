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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pvqc {

enum class FitModel {
  Exponential,  // V = C exp(-a N), fitted as ln V vs N
  Power,        // V = C N^{-c}, fitted as ln V vs ln N
  CubicLog,     // log10 V = b0 + b1 N + b2 N^2 + b3 N^3
};

FitModel parse_fit_model(std::string_view name);
std::string fit_model_name(FitModel model);
/// Coefficient names in report order, e.g. {"C", "a"}.
std::vector<std::string> fit_coefficient_names(FitModel model);

struct FitReport {
  FitModel model;
  std::vector<double> coefficients;
  double r_squared;  // in the transformed coordinates
  double aic;        // 2k + n ln(RSS / n)
  std::size_t points;
};

using ScalingPoint = std::pair<double, double>;  // (N, V)

/// Ordinary least squares in transformed coordinates. Needs >= 3 points
/// (>= 5 for the cubic) and V > 0 everywhere.
FitReport fit_scaling(const std::vector<ScalingPoint>& points, FitModel model);

/// "key: value" lines for one report.
std::string format_fit_report(const FitReport& report);

}  // namespace pvqc
