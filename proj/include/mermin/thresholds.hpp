#pragma once
// Critical family parameters (where Mermin violation switches on or off) and
// parameter sweeps with and without optimised local filters.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mermin/filtering.hpp"
#include "mermin/states.hpp"

namespace mermin {

enum class Mode { unfiltered, filtered };
enum class Certifier { bound, oracle };

std::string_view mode_name(Mode mode) noexcept;
std::string_view certifier_name(Certifier c) noexcept;
Mode parse_mode(std::string_view name);
Certifier parse_certifier(std::string_view name);

// A value counts as a violation only above 2 + kViolationMargin.
inline constexpr double kViolationMargin = 1e-9;

struct EvaluationOptions {
  std::uint64_t seed = 0;
  std::size_t oracle_restarts = 32;
  FilterSearchOptions filter;
};

struct PointEvaluation {
  double bound_unfiltered = 0.0;
  double oracle_unfiltered = 0.0;
  double bound_filtered = 0.0;
  double oracle_filtered = 0.0;
  double search_value = 0.0;  // best filter-search objective
  FilterParams best_filter;
};

// Filter objective used in filtered mode: the pair bound for diagonal
// filters, the oracle itself once unitaries are searched (generic rotations
// break the degenerate pair).
FilterObjective filtered_objective(const FilterSearchOptions& opts) noexcept;

PointEvaluation evaluate_point(const DensityMatrix& rho, const EvaluationOptions& opts,
                               bool filtered = true);

// Violation verdict of one certifier in one mode at a single state.
bool violates(const DensityMatrix& rho, Mode mode, Certifier certify, const EvaluationOptions& opts);

struct ThresholdOptions {
  double tol = 1e-4;
  Certifier certify = Certifier::oracle;
  std::size_t grid_points = 21;  // pre-sweep over [0, 1]
  EvaluationOptions eval;
  unsigned jobs = 1;
};

struct ThresholdResult {
  FamilyKind family = FamilyKind::ghz;
  Mode mode = Mode::unfiltered;
  Certifier certify = Certifier::oracle;
  double critical = 0.0;
  double lo = 0.0;  // lo < hi, hi - lo <= tol
  double hi = 0.0;
  bool violation_above = true;  // the verdict holds at hi (true) or at lo (false)
  bool bracket_verified = false;
  std::size_t evaluations = 0;
  std::vector<std::pair<double, bool>> grid;
};

// Pre-sweeps `indicator` on grid_points evenly spaced points of [0, 1],
// requires exactly one flip, then bisects that cell down to `tol`. The
// indicator is called concurrently during the pre-sweep when jobs > 1.
ThresholdResult locate_transition(const std::function<bool(double)>& indicator,
                                  std::size_t grid_points, double tol, unsigned jobs = 1);

ThresholdResult critical_param(FamilyKind family, Mode mode, const ThresholdOptions& opts = {});

struct SweepRow {
  double param = 0.0;
  double bound_unfiltered = 0.0;
  double bound_filtered = 0.0;
  double oracle_unfiltered = 0.0;
  double oracle_filtered = 0.0;
  bool violation_unfiltered = false;
  bool violation_filtered = false;
  std::array<double, 3> lmn{1.0, 1.0, 1.0};
  std::array<std::array<double, 3>, 3> angles{};
};

struct SweepOptions {
  EvaluationOptions eval;
  unsigned jobs = 1;
};

std::vector<double> sweep_grid(double lo, double hi, double step);
std::vector<SweepRow> sweep(FamilyKind family, double lo, double hi, double step,
                            const SweepOptions& opts = {});

inline constexpr const char* kSweepCsvHeader =
    "param,bound_unfiltered,bound_filtered,oracle_unfiltered,oracle_filtered,"
    "violation_unfiltered,violation_filtered,l,m,n";

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace mermin
