// Maximum-weight perfect matching on the padded UE x (RC + dummy) matrix.
// Weights are integral (price-byte units), so the Hungarian solution is
// exactly optimal.
#pragma once

#include <cstdint>
#include <vector>

namespace woin {

struct AssignmentProblem {
  // weights[i][j], square n x n. Columns [0, real_columns) are real RCs;
  // the rest are dummies carrying the -P_bar * psi penalties.
  std::vector<std::vector<std::int64_t>> weights;
  int real_columns = 0;
};

struct AssignmentSolution {
  std::vector<int> column_of_row;  // row i -> chosen column
  std::int64_t objective = 0;      // sum of chosen weights
};

// Builds the padded matrix of the scheduling problem:
//   payments[i][j] for the M real RCs,
//   -price_bar * drop_risk[i] for each of the (N - M) dummy columns,
// padding with zero-weight dummy rows when there are more RCs than UEs.
AssignmentProblem build_assignment(const std::vector<std::vector<std::int64_t>>& payments,
                                   const std::vector<std::int64_t>& drop_risk,
                                   std::int64_t price_bar);

// Hungarian algorithm (O(n^3)); throws on a non-square matrix.
AssignmentSolution solve_assignment(const AssignmentProblem& problem);

}  // namespace woin
