#include "mermin/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mermin {

namespace {

double diameter(const std::vector<std::vector<double>>& simplex) {
  double worst = 0.0;
  for (std::size_t v = 1; v < simplex.size(); ++v) {
    double d = 0.0;
    for (std::size_t i = 0; i < simplex[0].size(); ++i) {
      const double delta = simplex[v][i] - simplex[0][i];
      d += delta * delta;
    }
    worst = std::max(worst, std::sqrt(d));
  }
  return worst;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  const std::size_t dim = x0.size();
  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? INFINITY : v;
  };

  std::vector<std::vector<double>> simplex(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += opts.initial_step;
  std::vector<double> values(dim + 1);
  for (std::size_t v = 0; v <= dim; ++v) values[v] = eval(simplex[v]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s(dim + 1);
    std::vector<double> vals(dim + 1);
    for (std::size_t v = 0; v <= dim; ++v) {
      s[v] = std::move(simplex[order[v]]);
      vals[v] = values[order[v]];
    }
    simplex = std::move(s);
    values = std::move(vals);
  };
  auto along = [&](double t, std::vector<double>& out) {
    for (std::size_t i = 0; i < dim; ++i)
      out[i] = centroid[i] + t * (simplex[dim][i] - centroid[i]);
  };

  sort_simplex();
  while (result.iterations < opts.max_iters) {
    if (values[0] < opts.stop_below) {
      result.reached_target = true;
      break;
    }
    if (diameter(simplex) < opts.diameter_tol) {
      result.converged = true;
      break;
    }
    ++result.iterations;
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < dim; ++v)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v][i] / double(dim);

    along(-kReflect, trial);
    const double fr = eval(trial);
    if (fr < values[0]) {
      along(-kExpand, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[dim] = trial2;
        values[dim] = fe;
      } else {
        simplex[dim] = trial;
        values[dim] = fr;
      }
    } else if (fr < values[dim - 1]) {
      simplex[dim] = trial;
      values[dim] = fr;
    } else {
      const bool outside = fr < values[dim];
      along(outside ? -kContract : kContract, trial2);
      const double fc = eval(trial2);
      if (fc < (outside ? fr : values[dim])) {
        simplex[dim] = trial2;
        values[dim] = fc;
      } else {
        for (std::size_t v = 1; v <= dim; ++v) {
          for (std::size_t i = 0; i < dim; ++i)
            simplex[v][i] = simplex[0][i] + kShrink * (simplex[v][i] - simplex[0][i]);
          values[v] = eval(simplex[v]);
        }
      }
    }
    sort_simplex();
  }
  result.x = simplex[0];
  result.fx = values[0];
  return result;
}

}  // namespace mermin
