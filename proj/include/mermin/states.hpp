#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mermin/qalg.hpp"

namespace mermin {

// (|000> + |111>) / sqrt(2)
DensityMatrix ghz();

// p |GHZ><GHZ| + (1 - p)/4 * I_2 (x) diag(1, 0, 0, 1)
DensityMatrix noisy_ghz(double p);

// p |psi><psi| + (1 - p) |00><00| (x) I_2 / 2 with
// |psi> = cos(pi/8)|000> + sin(pi/8)|111>.
DensityMatrix psi_pi8_state(double p);

// Amplitude damping with rate gamma applied independently to each qubit.
DensityMatrix ad_apply(const DensityMatrix& rho, double gamma);

// Closed form of the amplitude-damped GHZ state. Written out term by term,
// not derived from ad_apply, so the two can cross-check each other.
DensityMatrix ad_ghz(double gamma);

// Single-qubit damping Kraus operators {E0, E1}.
std::array<ComplexMatrix, 2> ad_kraus(double gamma);

enum class FamilyKind { ghz, noisy_ghz, psi_pi8, ad_ghz, file };

struct StateFamily {
  FamilyKind kind = FamilyKind::ghz;
  double param = 1.0;
  std::optional<std::filesystem::path> path;

  bool parameterized() const noexcept {
    return kind == FamilyKind::noisy_ghz || kind == FamilyKind::psi_pi8 ||
           kind == FamilyKind::ad_ghz;
  }
};

std::string_view family_name(FamilyKind kind) noexcept;
FamilyKind parse_family(std::string_view name);

// Builds the family member at `param` (ignored for ghz / file).
DensityMatrix build_state(FamilyKind kind, double param);
DensityMatrix build_state(const StateFamily& family);

// State files: {"dim": 8, "matrix": [[[re, im], ...], ...]} row-major, numbers
// written with 17 significant digits.
std::string state_to_text(const ComplexMatrix& mat);
ComplexMatrix parse_matrix_text(std::string_view text, std::size_t expected_dim);
DensityMatrix load_state(const std::filesystem::path& path);
void save_state(const DensityMatrix& rho, const std::filesystem::path& path);

}  // namespace mermin
