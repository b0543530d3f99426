#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace mermin {

struct NelderMeadOptions {
  double initial_step = 0.5;
  double diameter_tol = 1e-9;
  std::size_t max_iters = 5000;
  // Stop as soon as the best vertex falls below this value.
  double stop_below = -INFINITY;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  bool reached_target = false;
};

// Minimises f from x0 with the standard reflect/expand/contract/shrink
// simplex. f may return +inf for infeasible points.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts = {});

}  // namespace mermin
