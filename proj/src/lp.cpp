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

#include "fairrank/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fairrank {
namespace {

constexpr double kSlackTolerance = 1e-11;
constexpr double kPivotTolerance = 1e-12;
constexpr std::size_t kDegenerateRun = 30;

}  // namespace

void LpProblem::add_row(std::span<const double> coeffs, double rhs) {
  if (coeffs.size() != vars) throw std::invalid_argument("lp row has wrong width");
  a.insert(a.end(), coeffs.begin(), coeffs.end());
  b.push_back(rhs);
}

LpSolution maximize(const LpProblem& lp, std::span<const std::size_t> start) {
  const std::size_t p = lp.vars;
  const std::size_t m = lp.rows();
  if (start.size() != p) throw std::invalid_argument("starting basis has wrong size");
  std::vector<std::size_t> basis(start.begin(), start.end());
  std::vector<char> in_basis(m, 0);
  for (std::size_t j : basis) in_basis.at(j) = 1;

  const auto P = static_cast<Eigen::Index>(p);
  const Eigen::Map<const Eigen::VectorXd> c(lp.c.data(), P);
  Eigen::MatrixXd B(P, P);
  Eigen::VectorXd bb(P), y(P), x(P), col(P), u(P);

  LpSolution out;
  const std::size_t limit = 1000 + 20 * m;
  std::size_t degenerate = 0;
  for (std::size_t it = 0; it < limit; ++it) {
    for (Eigen::Index r = 0; r < P; ++r) {
      auto row = lp.row(basis[static_cast<std::size_t>(r)]);
      for (Eigen::Index k = 0; k < P; ++k) B(r, k) = row[static_cast<std::size_t>(k)];
      bb[r] = lp.b[basis[static_cast<std::size_t>(r)]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) throw std::runtime_error("lp basis became singular");
    y = lu.solve(bb);
    x = B.transpose().fullPivLu().solve(c);

    // Reduced cost of dual column j is the primal slack of row j.
    const bool bland = degenerate >= kDegenerateRun;
    std::size_t enter = m;
    double most_negative = -kSlackTolerance;
    for (std::size_t j = 0; j < m; ++j) {
      if (in_basis[j]) continue;
      auto row = lp.row(j);
      double s = lp.b[j];
      for (std::size_t k = 0; k < p; ++k) s -= row[k] * y[static_cast<Eigen::Index>(k)];
      if (s < most_negative) {
        enter = j;
        if (bland) break;
        most_negative = s;
      }
    }
    out.iterations = it;
    if (enter == m) {
      out.status = LpStatus::kOptimal;
      out.y.assign(y.data(), y.data() + P);
      out.objective = c.dot(y);
      return out;
    }

    auto erow = lp.row(enter);
    for (Eigen::Index k = 0; k < P; ++k) col[k] = erow[static_cast<std::size_t>(k)];
    u = B.transpose().fullPivLu().solve(col);
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < P; ++r) {
      if (u[r] <= kPivotTolerance) continue;
      const double ratio = std::max(0.0, x[r]) / u[r];
      const bool tie = ratio == best && leave >= 0 &&
                       basis[static_cast<std::size_t>(r)] <
                           basis[static_cast<std::size_t>(leave)];
      if (ratio < best || tie) {
        best = ratio;
        leave = r;
      }
    }
    if (leave < 0) {
      out.status = LpStatus::kInfeasible;
      return out;
    }
    degenerate = best <= kPivotTolerance ? degenerate + 1 : 0;
    in_basis[basis[static_cast<std::size_t>(leave)]] = 0;
    basis[static_cast<std::size_t>(leave)] = enter;
    in_basis[enter] = 1;
  }
  out.status = LpStatus::kIterationLimit;
  return out;
}

}  // namespace fairrank
