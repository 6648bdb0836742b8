#pragma once

// Bundled example games.

#include "incentive/matrix_games.hpp"

namespace incentive::matrix {

namespace detail {
inline Eigen::MatrixXd m2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}
}  // namespace detail

/// Agent can be steered to the principal's preferred cell in either state;
/// without state information the principal pays an information rent.
inline CostTable scenario_a() {
  using detail::m2;
  return CostTable({m2(5, 5, 5, 1), m2(5, 1, 5, 5)}, {m2(4, 3, 2, 3), m2(2, 3, 4, 2)});
}

/// The agent gains from revealing the state when theta_1 is likely.
inline CostTable scenario_b() {
  using detail::m2;
  return CostTable({m2(4.95, 5, 5, 1), m2(5, 1, 5, 5)}, {m2(2, 5, 1, 2), m2(3, 1, 1, 2)});
}

}  // namespace incentive::matrix
