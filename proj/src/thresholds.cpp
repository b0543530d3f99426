#include "mermin/thresholds.hpp"

#include <cmath>
#include <cstdio>

#include "mermin/error.hpp"
#include "mermin/oracle.hpp"
#include "mermin/parallel.hpp"

namespace mermin {

std::string_view mode_name(Mode mode) noexcept {
  return mode == Mode::filtered ? "filtered" : "unfiltered";
}

std::string_view certifier_name(Certifier c) noexcept {
  return c == Certifier::oracle ? "oracle" : "bound";
}

Mode parse_mode(std::string_view name) {
  if (name == "unfiltered") return Mode::unfiltered;
  if (name == "filtered") return Mode::filtered;
  throw Error(ErrorKind::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

Certifier parse_certifier(std::string_view name) {
  if (name == "bound") return Certifier::bound;
  if (name == "oracle") return Certifier::oracle;
  throw Error(ErrorKind::InvalidArgument, "unknown certifier '" + std::string(name) + "'");
}

FilterObjective filtered_objective(const FilterSearchOptions& opts) noexcept {
  return opts.include_unitaries ? FilterObjective::oracle : FilterObjective::pair_bound;
}

namespace {

double oracle_value(const DensityMatrix& rho, const EvaluationOptions& opts) {
  OracleOptions oo;
  oo.seed = opts.seed;
  oo.restarts = opts.oracle_restarts;
  return maximize_mermin(rho, oo).value;
}

bool exceeds_local_bound(double v) { return v > kMerminLocalBound + kViolationMargin; }

}  // namespace

PointEvaluation evaluate_point(const DensityMatrix& rho, const EvaluationOptions& opts,
                               bool filtered) {
  PointEvaluation ev;
  ev.bound_unfiltered = mermin_bound(rho);
  ev.oracle_unfiltered = oracle_value(rho, opts);
  if (!filtered) {
    ev.bound_filtered = ev.bound_unfiltered;
    ev.oracle_filtered = ev.oracle_unfiltered;
    return ev;
  }
  FilterSearchOptions fo = opts.filter;
  fo.seed = opts.seed;
  const FilterSearchResult search = optimize_filters(rho, filtered_objective(fo), fo);
  ev.search_value = search.value;
  // With no feasible point anywhere the search value is -inf; fall back to
  // the identity filter, which is always admissible.
  ev.best_filter = std::isfinite(search.value) ? search.best : FilterParams{};
  const FilterTriple triple = ev.best_filter.triple();
  ev.bound_filtered = theorem_bound(rho, triple).bound;
  ev.oracle_filtered = oracle_value(apply_filters(rho, triple).rho_prime, opts);
  // The identity is a filter too; keep it when the search did worse.
  if (ev.oracle_unfiltered > ev.oracle_filtered) {
    ev.best_filter = FilterParams{};
    ev.bound_filtered = ev.bound_unfiltered;
    ev.oracle_filtered = ev.oracle_unfiltered;
  }
  return ev;
}

bool violates(const DensityMatrix& rho, Mode mode, Certifier certify, const EvaluationOptions& opts) {
  if (mode == Mode::unfiltered) {
    return exceeds_local_bound(certify == Certifier::bound ? mermin_bound(rho)
                                                           : oracle_value(rho, opts));
  }
  if (violates(rho, Mode::unfiltered, certify, opts)) return true;
  FilterSearchOptions fo = opts.filter;
  fo.seed = opts.seed;
  // Only the verdict matters here, so stop at the first violating filter.
  fo.stop_above = kMerminLocalBound + kViolationMargin;
  const FilterSearchResult search = optimize_filters(rho, filtered_objective(fo), fo);
  if (!std::isfinite(search.value)) return false;
  const FilterTriple triple = search.best.triple();
  if (certify == Certifier::bound) return exceeds_local_bound(theorem_bound(rho, triple).bound);
  return exceeds_local_bound(oracle_value(apply_filters(rho, triple).rho_prime, opts));
}

ThresholdResult locate_transition(const std::function<bool(double)>& indicator,
                                  std::size_t grid_points, double tol, unsigned jobs) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
  if (grid_points < 2) throw Error(ErrorKind::InvalidArgument, "grid needs >= 2 points");

  ThresholdResult result;
  const std::size_t n = grid_points;
  result.grid.resize(n);
  std::vector<char> verdicts(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    verdicts[i] = indicator(double(i) / double(n - 1));
  });
  result.evaluations += n;
  std::size_t flips = 0;
  std::size_t cell = 0;
  for (std::size_t i = 0; i < n; ++i) {
    result.grid[i] = {double(i) / double(n - 1), verdicts[i] != 0};
    if (i > 0 && verdicts[i] != verdicts[i - 1]) {
      ++flips;
      cell = i - 1;
    }
  }
  auto grid_text = [&] {
    std::string s;
    for (const auto& [p, v] : result.grid) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.3g:%d", s.empty() ? "" : " ", p, v ? 1 : 0);
      s += buf;
    }
    return s;
  };
  if (flips == 0) {
    if (!verdicts[0]) {
      throw Error(ErrorKind::NoViolationAnywhere, "no violation on the grid: " + grid_text());
    }
    throw Error(ErrorKind::InvalidArgument, "violation on the whole grid: " + grid_text());
  }
  if (flips > 1) throw Error(ErrorKind::NonMonotoneIndicator, grid_text());

  auto probe = [&](double param) {
    ++result.evaluations;
    return indicator(param);
  };
  double lo = result.grid[cell].first;
  double hi = result.grid[cell + 1].first;
  result.violation_above = result.grid[cell + 1].second;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid) == result.violation_above) hi = mid;
    else lo = mid;
  }
  result.lo = lo;
  result.hi = hi;
  result.critical = 0.5 * (lo + hi);
  result.bracket_verified = probe(hi) == result.violation_above && probe(lo) != result.violation_above;
  return result;
}

ThresholdResult critical_param(FamilyKind family, Mode mode, const ThresholdOptions& opts) {
  if (family == FamilyKind::ghz || family == FamilyKind::file) {
    throw Error(ErrorKind::InvalidArgument,
                "threshold search needs a parameterised family, got " +
                    std::string(family_name(family)));
  }
  ThresholdResult result = locate_transition(
      [&](double param) {
        return violates(build_state(family, param), mode, opts.certify, opts.eval);
      },
      opts.grid_points, opts.tol, opts.jobs);
  result.family = family;
  result.mode = mode;
  result.certify = opts.certify;
  return result;
}

std::vector<double> sweep_grid(double lo, double hi, double step) {
  if (!(lo < hi) || !(step > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "sweep needs lo < hi and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo + double(i) * step;
  return grid;
}

std::vector<SweepRow> sweep(FamilyKind family, double lo, double hi, double step,
                            const SweepOptions& opts) {
  const std::vector<double> grid = sweep_grid(lo, hi, step);
  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), opts.jobs, [&](std::size_t i) {
    const DensityMatrix rho = build_state(family, grid[i]);
    const PointEvaluation ev = evaluate_point(rho, opts.eval);
    SweepRow& row = rows[i];
    row.param = grid[i];
    row.bound_unfiltered = ev.bound_unfiltered;
    row.bound_filtered = ev.bound_filtered;
    row.oracle_unfiltered = ev.oracle_unfiltered;
    row.oracle_filtered = ev.oracle_filtered;
    row.violation_unfiltered = exceeds_local_bound(ev.oracle_unfiltered);
    row.violation_filtered = exceeds_local_bound(ev.oracle_filtered);
    row.lmn = ev.best_filter.lmn();
    row.angles = ev.best_filter.angles;
  });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  char buf[512];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.12g,%.12g,%.12g,%.12g,%d,%d,%.12g,%.12g,%.12g\n",
                  r.param, r.bound_unfiltered, r.bound_filtered, r.oracle_unfiltered,
                  r.oracle_filtered, r.violation_unfiltered ? 1 : 0, r.violation_filtered ? 1 : 0,
                  r.lmn[0], r.lmn[1], r.lmn[2]);
    out += buf;
  }
  return out;
}

}  // namespace mermin
