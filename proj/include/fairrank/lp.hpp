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

#ifndef FAIRRANK_LP_HPP_
#define FAIRRANK_LP_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace fairrank {

/// maximize c.y subject to A y <= b, y free. Sized for a handful of
/// variables and any number of rows.
struct LpProblem {
  std::size_t vars = 0;
  std::vector<double> a;  // row-major, rows() x vars
  std::vector<double> b;
  std::vector<double> c;

  explicit LpProblem(std::size_t n = 0) : vars(n), c(n, 0.0) {}

  std::size_t rows() const { return b.size(); }
  std::span<const double> row(std::size_t i) const { return {a.data() + i * vars, vars}; }
  void add_row(std::span<const double> coeffs, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> y;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Simplex on the dual (min b.x, A^T x = c, x >= 0). `basis` names `vars`
/// rows whose matrix is nonsingular and whose dual solution B^-T c is
/// non-negative; the caller supplies it, which removes the need for a phase 1.
/// Dantzig pricing, falling back to Bland's rule after a run of degenerate
/// pivots.
LpSolution maximize(const LpProblem& lp, std::span<const std::size_t> basis);

}  // namespace fairrank

#endif  // FAIRRANK_LP_HPP_
