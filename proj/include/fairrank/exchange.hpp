// Copyright 2026 The Authors.
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

#ifndef FAIRRANK_EXCHANGE_HPP_
#define FAIRRANK_EXCHANGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairrank/dataset.hpp"

namespace fairrank {

class DegenerateExchange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// a >= b on every attribute and a > b on at least one.
bool dominates(std::span<const double> a, std::span<const double> b);

enum class ExchangeStatus { kOk, kDominance, kCoincident };

struct Exchange2D {
  ExchangeStatus status = ExchangeStatus::kOk;
  double theta = 0.0;  // valid only for kOk

  bool ok() const { return status == ExchangeStatus::kOk; }
};

/// Angle where the weights (cos t, sin t) tie items a and b in 2D.
Exchange2D exchange_angle_2d(std::span<const double> a, std::span<const double> b);

/// Weight-space exchange: <normal, w> = f_w(a) - f_w(b).
struct WeightSpaceExchange {
  std::vector<double> normal;
  ItemId item_i = 0;
  ItemId item_j = 0;
};

WeightSpaceExchange weight_space_exchange(std::span<const double> a,
                                          std::span<const double> b,
                                          ItemId item_i = 0, ItemId item_j = 0);

/// Exchange surface linearized in angle coordinates: sum_k h[k] theta_k = 1,
/// or = 0 when homogeneous.
struct AngleHyperplane {
  std::vector<double> coeffs;
  bool homogeneous = false;
  ItemId item_i = 0;
  ItemId item_j = 0;

  std::size_t dim() const { return coeffs.size(); }
  double offset() const { return homogeneous ? 0.0 : 1.0; }
  double eval(std::span<const double> theta) const;  // h . theta
  double norm() const;
};

/// Plane plus the angle points it was fitted through.
struct HyperpolarFit {
  AngleHyperplane plane;
  std::vector<std::vector<double>> support;
};

HyperpolarFit hyperpolar_fit(std::span<const double> a, std::span<const double> b,
                             ItemId item_i = 0, ItemId item_j = 0);
AngleHyperplane hyperpolar(std::span<const double> a, std::span<const double> b,
                           ItemId item_i = 0, ItemId item_j = 0);

/// max over support points of |f(a) - f(b)| / max(|f(a)|, |f(b)|).
double hyperpolar_residual(const HyperpolarFit& fit, std::span<const double> a,
                           std::span<const double> b);

struct ExchangeSetStats {
  std::size_t pairs = 0;
  std::size_t dominated = 0;
  std::size_t coincident = 0;
  std::size_t homogeneous = 0;
  std::size_t degenerate = 0;  // skipped
};

/// One plane per non-dominated, non-coincident pair (i < j by row), in (i, j)
/// order. Rows identical to an earlier row are dropped first.
std::vector<AngleHyperplane> build_exchange_set(const Dataset& data,
                                                ExchangeSetStats* stats = nullptr);

}  // namespace fairrank

#endif  // FAIRRANK_EXCHANGE_HPP_
