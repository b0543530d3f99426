#pragma once
// Bell operators built directly from measurement settings, and their
// maximisation over settings by multi-start coordinate ascent. This is the
// ground truth the singular-value bounds are checked against.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mermin/qalg.hpp"

namespace mermin {

struct MeasurementSettings {
  BlochVector a, a_prime, b, b_prime, c, c_prime;
};

struct OracleResult {
  double value = 0.0;  // |<operator>| at `settings`
  MeasurementSettings settings;
  std::size_t iterations = 0;  // coordinate sweeps summed over restarts
  std::size_t restarts_used = 0;
};

struct OracleOptions {
  std::uint64_t seed = 0;
  std::size_t restarts = 32;
  std::size_t max_sweeps = 10000;
  double tol = 1e-12;
  unsigned jobs = 1;
  // When set, receives the objective after every single-vector update of
  // restart 0. Test hook for the monotonicity property.
  std::vector<double>* history = nullptr;
};

// A0 (B0 C1 + B1 C0) + A1 (B0 C0 - B1 C1)
ComplexMatrix mermin_operator(const MeasurementSettings& s);
double mermin_expectation(const DensityMatrix& rho, const MeasurementSettings& s);
OracleResult maximize_mermin(const DensityMatrix& rho, const OracleOptions& opts = {});
OracleResult maximize_mermin(const DensityMatrix& rho, std::uint64_t seed, std::size_t restarts = 32);

// A0 (B0 C0 + B0 C1 + B1 C0 - B1 C1) + A1 (B0 C0 - B0 C1 - B1 C0 - B1 C1)
ComplexMatrix svetlichny_operator(const MeasurementSettings& s);
double svetlichny_expectation(const DensityMatrix& rho, const MeasurementSettings& s);
OracleResult maximize_svetlichny(const DensityMatrix& rho, const OracleOptions& opts = {});
OracleResult maximize_svetlichny(const DensityMatrix& rho, std::uint64_t seed,
                                 std::size_t restarts = 32);

inline constexpr double kMerminLocalBound = 2.0;
inline constexpr double kSvetlichnyLocalBound = 4.0;

}  // namespace mermin
