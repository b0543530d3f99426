#include "mermin/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mermin/error.hpp"

namespace mermin {

namespace {

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

}  // namespace

DensityMatrix ghz() {
  ComplexMatrix m(8, 8);
  m(0, 0) = m(0, 7) = m(7, 0) = m(7, 7) = 0.5;
  return validate_density(std::move(m));
}

DensityMatrix noisy_ghz(double p) {
  require_unit_interval(p, "p");
  ComplexMatrix m = ghz().matrix() * cplx(p);
  const double w = (1.0 - p) / 4.0;
  for (std::size_t idx : {0u, 3u, 4u, 7u}) m(idx, idx) += w;
  return validate_density(std::move(m));
}

DensityMatrix psi_pi8_state(double p) {
  require_unit_interval(p, "p");
  const double c = std::cos(std::numbers::pi / 8.0);
  const double s = std::sin(std::numbers::pi / 8.0);
  ComplexMatrix m(8, 8);
  m(0, 0) = p * c * c;
  m(0, 7) = m(7, 0) = p * c * s;
  m(7, 7) = p * s * s;
  m(0, 0) += 0.5 * (1.0 - p);
  m(1, 1) += 0.5 * (1.0 - p);
  return validate_density(std::move(m));
}

std::array<ComplexMatrix, 2> ad_kraus(double gamma) {
  require_unit_interval(gamma, "gamma");
  return {ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - gamma)}},
          ComplexMatrix{{0.0, std::sqrt(gamma)}, {0.0, 0.0}}};
}

DensityMatrix ad_apply(const DensityMatrix& rho, double gamma) {
  const auto kraus = ad_kraus(gamma);
  ComplexMatrix out(8, 8);
  for (const auto& ka : kraus)
    for (const auto& kb : kraus)
      for (const auto& kc : kraus) out += sandwich(kron3(ka, kb, kc), rho.matrix());
  return validate_density(std::move(out));
}

DensityMatrix ad_ghz(double gamma) {
  require_unit_interval(gamma, "gamma");
  const double g = gamma;
  const double h = 1.0 - g;
  ComplexMatrix m(8, 8);
  m(0, 0) = 0.5 * (1.0 + g * g * g);
  m(7, 7) = 0.5 * h * h * h;
  m(0, 7) = m(7, 0) = 0.5 * std::pow(h, 1.5);
  for (std::size_t idx : {1u, 2u, 4u}) m(idx, idx) = 0.5 * h * g * g;
  for (std::size_t idx : {3u, 5u, 6u}) m(idx, idx) = 0.5 * h * h * g;
  return validate_density(std::move(m));
}

std::string_view family_name(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::ghz: return "ghz";
    case FamilyKind::noisy_ghz: return "noisy-ghz";
    case FamilyKind::psi_pi8: return "psi-pi8";
    case FamilyKind::ad_ghz: return "ad-ghz";
    case FamilyKind::file: return "file";
  }
  return "unknown";
}

FamilyKind parse_family(std::string_view name) {
  for (FamilyKind k : {FamilyKind::ghz, FamilyKind::noisy_ghz, FamilyKind::psi_pi8,
                       FamilyKind::ad_ghz, FamilyKind::file}) {
    if (family_name(k) == name) return k;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown state family '" + std::string(name) + "'");
}

DensityMatrix build_state(FamilyKind kind, double param) {
  switch (kind) {
    case FamilyKind::ghz: return ghz();
    case FamilyKind::noisy_ghz: return noisy_ghz(param);
    case FamilyKind::psi_pi8: return psi_pi8_state(param);
    case FamilyKind::ad_ghz: return ad_ghz(param);
    case FamilyKind::file: break;
  }
  throw Error(ErrorKind::InvalidArgument, "the file family needs a path");
}

DensityMatrix build_state(const StateFamily& family) {
  if (family.kind == FamilyKind::file) {
    if (!family.path) throw Error(ErrorKind::InvalidArgument, "the file family needs a path");
    return load_state(*family.path);
  }
  return build_state(family.kind, family.param);
}

}  // namespace mermin
