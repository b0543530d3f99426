#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mermin/error.hpp"
#include "mermin/states.hpp"
#include "support.hpp"

using namespace mermin;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mermin_test_states_" + name);
}

ComplexMatrix ket_projector(const std::array<cplx, 8>& psi) {
  ComplexMatrix m(8, 8);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) m(r, c) = psi[r] * std::conj(psi[c]);
  return m;
}

double min_eigenvalue(const DensityMatrix& rho) { return eig_hermitian(rho.matrix()).values[0]; }

}  // namespace

TEST_CASE("ghz") {
  const DensityMatrix g = ghz();
  CHECK(g(0, 0).real() == doctest::Approx(0.5));
  CHECK(g(0, 7).real() == doctest::Approx(0.5));
  CHECK(g.purity() == doctest::Approx(1.0));
}

TEST_CASE("noisy ghz") {
  CHECK(noisy_ghz(1.0).matrix().max_abs_diff(ghz().matrix()) < 1e-15);
  CHECK(noisy_ghz(0.0).matrix().max_abs_diff(
            ComplexMatrix::diagonal({0.25, 0, 0, 0.25, 0.25, 0, 0, 0.25})) < 1e-15);
  const DensityMatrix half = noisy_ghz(0.5);
  CHECK(half.matrix().trace().real() == doctest::Approx(1.0));
  CHECK(min_eigenvalue(half) >= -1e-12);
  for (int i = 0; i <= 20; ++i) CHECK_NOTHROW(noisy_ghz(i / 20.0));
  CHECK_THROWS_AS(noisy_ghz(1.5), Error);
}

TEST_CASE("psi pi/8 family") {
  CHECK(psi_pi8_state(1.0)(0, 7).real() == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-14));
  CHECK(psi_pi8_state(0.0).matrix().max_abs_diff(
            ComplexMatrix::diagonal({0.5, 0.5, 0, 0, 0, 0, 0, 0})) < 1e-15);
  CHECK(psi_pi8_state(0.5).matrix().trace().real() == doctest::Approx(1.0));

  // Independent construction from the ket.
  const double p = 0.37;
  std::array<cplx, 8> psi{};
  psi[0] = std::cos(M_PI / 8);
  psi[7] = std::sin(M_PI / 8);
  ComplexMatrix expect = ket_projector(psi) * p;
  expect(0, 0) += (1 - p) / 2;
  expect(1, 1) += (1 - p) / 2;
  CHECK(psi_pi8_state(p).matrix().max_abs_diff(expect) < 1e-15);
  for (int i = 0; i <= 20; ++i) CHECK_NOTHROW(psi_pi8_state(i / 20.0));
}

TEST_CASE("amplitude damping channel") {
  for (double g : {0.0, 0.2, 0.5, 1.0}) {
    const auto k = ad_kraus(g);
    const ComplexMatrix sum =
        test::naive_mul(test::naive_adjoint(k[0]), k[0]) + test::naive_mul(test::naive_adjoint(k[1]), k[1]);
    CHECK(sum.max_abs_diff(ComplexMatrix::identity(2)) <= 1e-15);
  }

  std::mt19937_64 rng(11);
  const DensityMatrix rho = test::random_state(rng);
  CHECK(ad_apply(rho, 0.0).matrix().max_abs_diff(rho.matrix()) < 1e-15);
  ComplexMatrix vac(8, 8);
  vac(0, 0) = 1.0;
  CHECK(ad_apply(rho, 1.0).matrix().max_abs_diff(vac) < 1e-14);

  for (int t = 0; t < 30; ++t) {
    const DensityMatrix r = test::random_state_any_rank(rng);
    const double g = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const DensityMatrix out = ad_apply(r, g);
    CHECK(out.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(min_eigenvalue(out) >= -1e-12);
  }
}

TEST_CASE("damped ghz closed form agrees with the channel") {
  CHECK(ad_ghz(0.0).matrix().max_abs_diff(ghz().matrix()) < 1e-15);
  CHECK(ad_ghz(0.5)(0, 0).real() == doctest::Approx(0.5625).epsilon(1e-14));
  CHECK(ad_ghz(0.5)(0, 7).real() == doctest::Approx(std::pow(0.5, 1.5) / 2).epsilon(1e-14));
  for (int i = 0; i <= 10; ++i) {
    const double g = i / 10.0;
    CHECK(ad_apply(ghz(), g).matrix().max_abs_diff(ad_ghz(g).matrix()) <= 1e-12);
  }
}

TEST_CASE("family names") {
  for (FamilyKind k : {FamilyKind::ghz, FamilyKind::noisy_ghz, FamilyKind::psi_pi8,
                       FamilyKind::ad_ghz, FamilyKind::file}) {
    CHECK(parse_family(family_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_family("isotropic"), Error);
  CHECK(build_state(FamilyKind::ad_ghz, 0.3).matrix().max_abs_diff(ad_ghz(0.3).matrix()) == 0.0);
  CHECK_THROWS_AS(build_state(FamilyKind::file, 0.0), Error);
}

TEST_CASE("state files") {
  const auto path = temp_file("ghz.json");
  save_state(ghz(), path);
  const DensityMatrix back = load_state(path);
  CHECK(back.matrix().max_abs_diff(ghz().matrix()) == 0.0);

  std::mt19937_64 rng(12);
  const DensityMatrix r = test::random_state(rng);
  save_state(r, path);
  CHECK(load_state(path).matrix().max_abs_diff(r.matrix()) == 0.0);

  const auto mixed = temp_file("mixed.json");
  {
    std::ofstream out(mixed);
    out << state_to_text(ComplexMatrix::identity(8) * (1.0 / 8));
  }
  CHECK_NOTHROW(load_state(mixed));

  auto kind_of_file = [](const std::filesystem::path& p) {
    try {
      (void)load_state(p);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  {
    std::ofstream out(mixed);
    out << state_to_text(ComplexMatrix::identity(8) * 0.25);
  }
  CHECK(kind_of_file(mixed) == ErrorKind::NotUnitTrace);
  {
    std::ofstream out(mixed);
    out << "{\"dim\": 8, \"matrix\": [[1]]}";
  }
  CHECK(kind_of_file(mixed) == ErrorKind::ParseError);
  {
    std::ofstream out(mixed);
    out << "not json";
  }
  CHECK(kind_of_file(mixed) == ErrorKind::ParseError);
  CHECK(kind_of_file(temp_file("missing.json")) == ErrorKind::ParseError);
  std::filesystem::remove(path);
  std::filesystem::remove(mixed);
}
