#pragma once
// Local filtering rho -> (F_A (x) F_B (x) F_C) rho (...)^dagger / F and the
// filtered Mermin bound computed from the diagonal filter parts alone.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mermin/correlation.hpp"
#include "mermin/qalg.hpp"

namespace mermin {

// Positive single-qubit filter in normal form U diag(l, 1) U^dagger.
class LocalFilter {
 public:
  LocalFilter() : unitary_(ComplexMatrix::identity(2)) {}

  static LocalFilter from_normal_form(ComplexMatrix unitary, double l);
  static LocalFilter diagonal(double l) { return from_normal_form(ComplexMatrix::identity(2), l); }
  // U = Rz(phi) Ry(theta) Rz(psi).
  static LocalFilter from_angles(double l, double theta, double phi, double psi);

  const ComplexMatrix& unitary() const noexcept { return unitary_; }
  double l() const noexcept { return l_; }
  ComplexMatrix sigma() const;  // diag(l, 1)
  ComplexMatrix raw() const;    // U diag(l, 1) U^dagger
  bool unitary_is_identity() const;

 private:
  LocalFilter(ComplexMatrix unitary, double l) : unitary_(std::move(unitary)), l_(l) {}

  ComplexMatrix unitary_;
  double l_ = 1.0;
};

// Spectral decomposition of a PSD 2x2 matrix, rescaled so that the entry
// paired with |1> is 1. Full-rank filters get l >= 1 (larger eigenvalue
// first); rank-one filters get l = 0.
LocalFilter filter_normal_form(const ComplexMatrix& raw);

struct FilterTriple {
  LocalFilter a, b, c;

  static FilterTriple identity() { return {}; }
  static FilterTriple diagonal(double l, double m, double n) {
    return {LocalFilter::diagonal(l), LocalFilter::diagonal(m), LocalFilter::diagonal(n)};
  }
};

// Norms at or below this mean the filter (almost) never succeeds on rho.
inline constexpr double kAnnihilationTol = 1e-12;

struct FilteredState {
  DensityMatrix rho_prime;
  double norm = 0.0;  // trace of the unnormalised filtered operator
};

FilteredState apply_filters(const DensityMatrix& rho, const FilterTriple& f);

struct FilteredBoundReport {
  double normalization = 0.0;               // F = Tr[rho~ (S_A^2 (x) S_B^2 (x) S_C^2)]
  std::array<double, 3> singular_values{};  // of D~ / F, descending
  double bound = 0.0;                       // 2 sqrt(2) lambda'_1
  PairBound pair;
  bool pair_is_max = false;
};

// Evaluates the filtered bound without forming rho': rotates rho into the
// filters' eigenbases, contracts with (S sigma_i S) (x) (S sigma_j S) (x)
// (S sigma_k S), and divides by F.
FilteredBoundReport theorem_bound(const DensityMatrix& rho, const FilterTriple& f);

enum class FilterObjective { pair_bound, oracle };

struct FilterSearchOptions {
  std::size_t restarts = 20;
  std::uint64_t seed = 0;
  std::size_t max_iters = 5000;
  bool include_unitaries = false;
  double initial_step = 0.5;
  double diameter_tol = 1e-9;
  double log_bound = 7.0;  // |log l|, |log m|, |log n| <= log_bound
  // Inner oracle used by the oracle objective; lighter than a certifying run.
  std::size_t oracle_restarts = 4;
  double oracle_tol = 1e-9;
  std::size_t oracle_max_sweeps = 500;
  // Stop once the objective exceeds this. Restarts then run in batches of
  // `jobs` and later batches are skipped, which keeps results deterministic.
  double stop_above = INFINITY;
  unsigned jobs = 1;
};

struct FilterParams {
  std::array<double, 3> log_scale{};            // log l, log m, log n
  std::array<std::array<double, 3>, 3> angles{};  // (theta, phi, psi) per party

  FilterTriple triple() const;
  std::array<double, 3> lmn() const;
};

struct RestartLog {
  std::size_t restart = 0;
  std::vector<double> start;
  std::vector<double> best_x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct FilterSearchResult {
  FilterParams best;
  double value = 0.0;
  std::size_t best_restart = 0;
  bool reached_target = false;
  std::vector<RestartLog> trace;  // restarts actually run
};

// Objective value of one filter choice; -inf when the filter annihilates the
// state or (pair_bound) when the degenerate pair is not the top level.
double filter_objective(const DensityMatrix& rho, const FilterTriple& f, FilterObjective objective,
                        const FilterSearchOptions& opts);

// Multi-start Nelder-Mead over (log l, log m, log n) and, optionally, three
// Euler angles per party. Restart 0 starts at the identity filter.
FilterSearchResult optimize_filters(const DensityMatrix& rho, FilterObjective objective,
                                    const FilterSearchOptions& opts = {});

}  // namespace mermin
