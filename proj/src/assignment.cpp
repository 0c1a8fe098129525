#include "woin/assignment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace woin {

AssignmentProblem build_assignment(const std::vector<std::vector<std::int64_t>>& payments,
                                   const std::vector<std::int64_t>& drop_risk,
                                   std::int64_t price_bar) {
  const int n_ues = static_cast<int>(payments.size());
  if (n_ues != static_cast<int>(drop_risk.size())) {
    throw std::invalid_argument("build_assignment: payments/drop_risk size mismatch");
  }
  const int n_rcs = n_ues > 0 ? static_cast<int>(payments[0].size()) : 0;
  const int n = std::max(n_ues, n_rcs);

  AssignmentProblem prob;
  prob.real_columns = n_rcs;
  prob.weights.assign(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n_ues; ++i) {
    if (static_cast<int>(payments[i].size()) != n_rcs) {
      throw std::invalid_argument("build_assignment: ragged payment matrix");
    }
    for (int j = 0; j < n; ++j) {
      prob.weights[i][j] = j < n_rcs ? payments[i][j] : -price_bar * drop_risk[i];
    }
  }
  // rows beyond n_ues are dummy UEs with all-zero weights
  return prob;
}

// Hungarian algorithm in the potentials formulation, minimizing cost =
// -weight. Potentials stay integral on integral input, so the optimum is
// exact.
AssignmentSolution solve_assignment(const AssignmentProblem& problem) {
  const auto& w = problem.weights;
  const int n = static_cast<int>(w.size());
  for (const auto& row : w) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("solve_assignment: matrix must be square");
    }
  }
  if (n == 0) return {};

  const std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based arrays; p[j] = row matched to column j
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      std::int64_t delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = -w[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  AssignmentSolution sol;
  sol.column_of_row.assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] >= 1) sol.column_of_row[p[j] - 1] = j - 1;
  }
  for (int i = 0; i < n; ++i) sol.objective += w[i][sol.column_of_row[i]];
  return sol;
}

}  // namespace woin
