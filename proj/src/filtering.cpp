#include "mermin/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mermin/error.hpp"
#include "mermin/nelder_mead.hpp"
#include "mermin/oracle.hpp"
#include "mermin/parallel.hpp"
#include "mermin/random.hpp"

namespace mermin {

namespace {

constexpr double kUnitaryTol = 1e-10;

ComplexMatrix tensor_unitary(const FilterTriple& f) {
  return kron3(f.a.unitary(), f.b.unitary(), f.c.unitary());
}

}  // namespace

LocalFilter LocalFilter::from_normal_form(ComplexMatrix unitary, double l) {
  if (unitary.rows() != 2 || unitary.cols() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "filter unitary must be 2x2");
  }
  if ((unitary * unitary.adjoint()).max_abs_diff(ComplexMatrix::identity(2)) > kUnitaryTol) {
    throw Error(ErrorKind::InvalidArgument, "filter eigenbasis is not unitary");
  }
  if (!(l >= 0.0) || !std::isfinite(l)) {
    throw Error(ErrorKind::InvalidArgument, "filter scale l must be finite and >= 0");
  }
  return LocalFilter(std::move(unitary), l);
}

LocalFilter LocalFilter::from_angles(double l, double theta, double phi, double psi) {
  auto rz = [](double a) {
    return ComplexMatrix::diagonal({std::polar(1.0, -a / 2), std::polar(1.0, a / 2)});
  };
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const ComplexMatrix ry{{c, -s}, {s, c}};
  return from_normal_form(rz(phi) * ry * rz(psi), l);
}

ComplexMatrix LocalFilter::sigma() const { return ComplexMatrix::diagonal({l_, 1.0}); }

ComplexMatrix LocalFilter::raw() const { return sandwich(unitary_, sigma()); }

bool LocalFilter::unitary_is_identity() const {
  return unitary_.max_abs_diff(ComplexMatrix::identity(2)) == 0.0;
}

LocalFilter filter_normal_form(const ComplexMatrix& raw) {
  if (raw.rows() != 2 || raw.cols() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "filter must be 2x2");
  }
  if (!raw.is_hermitian(kHermitianTol)) {
    throw Error(ErrorKind::NotPSD, "filter is not Hermitian");
  }
  const EigenSystem es = eig_hermitian((raw + raw.adjoint()) * cplx(0.5));
  const double lo = es.values[0];
  const double hi = es.values[1];
  if (lo < -kPsdTol) throw Error(ErrorKind::NotPSD, "filter eigenvalue " + std::to_string(lo));
  if (hi <= kAnnihilationTol) {
    throw Error(ErrorKind::BothSingularValuesZero, "filter is zero");
  }
  auto columns = [&](int first, int second) {
    ComplexMatrix u(2, 2);
    for (int r = 0; r < 2; ++r) {
      u(r, 0) = es.vectors(r, first);
      u(r, 1) = es.vectors(r, second);
    }
    return u;
  };
  if (hi - lo <= 1e-12 * hi) return LocalFilter::from_normal_form(ComplexMatrix::identity(2), hi / lo);
  if (lo > 1e-12 * hi) return LocalFilter::from_normal_form(columns(1, 0), hi / lo);
  return LocalFilter::from_normal_form(columns(0, 1), 0.0);
}

FilteredState apply_filters(const DensityMatrix& rho, const FilterTriple& f) {
  const ComplexMatrix k = kron3(f.a.raw(), f.b.raw(), f.c.raw());
  ComplexMatrix out = sandwich(k, rho.matrix());
  const double norm = out.trace().real();
  if (!(norm > kAnnihilationTol)) {
    throw Error(ErrorKind::FilterAnnihilatesState,
                "filtered norm " + std::to_string(norm) + " <= 1e-12");
  }
  out *= cplx(1.0 / norm);
  return {validate_density(std::move(out)), norm};
}

FilteredBoundReport theorem_bound(const DensityMatrix& rho, const FilterTriple& f) {
  const bool rotated = !(f.a.unitary_is_identity() && f.b.unitary_is_identity() &&
                         f.c.unitary_is_identity());
  // rho~ = (U^dagger (x) V^dagger (x) W^dagger) rho (U (x) V (x) W)
  const ComplexMatrix rho_tilde =
      rotated ? sandwich(tensor_unitary(f).adjoint(), rho.matrix()) : rho.matrix();

  const ComplexMatrix sa = f.a.sigma();
  const ComplexMatrix sb = f.b.sigma();
  const ComplexMatrix sc = f.c.sigma();
  FilteredBoundReport report;
  report.normalization =
      expectation_unchecked(rho_tilde, kron3(sa * sa, sb * sb, sc * sc));
  if (!(report.normalization > kAnnihilationTol)) {
    throw Error(ErrorKind::FilterAnnihilatesState,
                "normalisation F = " + std::to_string(report.normalization) + " <= 1e-12");
  }

  std::array<ComplexMatrix, 3> alpha, beta, gamma;
  for (int i = 0; i < 3; ++i) {
    alpha[i] = sa * pauli(i + 1) * sa;
    beta[i] = sb * pauli(i + 1) * sb;
    gamma[i] = sc * pauli(i + 1) * sc;
  }
  CorrelationTensor d;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const ComplexMatrix ab = kron(alpha[i], beta[j]);
      for (int k = 0; k < 3; ++k)
        d(i, j, k) = expectation_unchecked(rho_tilde, kron(ab, gamma[k])) / report.normalization;
    }

  const SingularTriple s = singular_triple(fold(d));
  report.singular_values = s.values;
  report.bound = mermin_bound(s);
  report.pair = pair_bound(s);
  report.pair_is_max = report.pair.pair_is_max;
  return report;
}

std::array<double, 3> FilterParams::lmn() const {
  return {std::exp(log_scale[0]), std::exp(log_scale[1]), std::exp(log_scale[2])};
}

FilterTriple FilterParams::triple() const {
  const auto s = lmn();
  auto make = [&](int p) {
    const auto& a = angles[p];
    if (a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0) return LocalFilter::diagonal(s[p]);
    return LocalFilter::from_angles(s[p], a[0], a[1], a[2]);
  };
  return {make(0), make(1), make(2)};
}

double filter_objective(const DensityMatrix& rho, const FilterTriple& f, FilterObjective objective,
                        const FilterSearchOptions& opts) {
  try {
    if (objective == FilterObjective::pair_bound) {
      const FilteredBoundReport r = theorem_bound(rho, f);
      return r.pair_is_max ? r.pair.value : -INFINITY;
    }
    const FilteredState fs = apply_filters(rho, f);
    OracleOptions oo;
    oo.seed = opts.seed;
    oo.restarts = opts.oracle_restarts;
    oo.tol = opts.oracle_tol;
    oo.max_sweeps = opts.oracle_max_sweeps;
    return maximize_mermin(fs.rho_prime, oo).value;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::FilterAnnihilatesState || e.kind() == ErrorKind::NotPSD ||
        e.kind() == ErrorKind::NotUnitTrace || e.kind() == ErrorKind::NotHermitian) {
      return -INFINITY;
    }
    throw;
  }
}

namespace {

FilterParams decode(const std::vector<double>& x, const FilterSearchOptions& opts) {
  FilterParams p;
  for (int i = 0; i < 3; ++i) p.log_scale[i] = std::clamp(x[i], -opts.log_bound, opts.log_bound);
  if (opts.include_unitaries) {
    for (int party = 0; party < 3; ++party)
      for (int a = 0; a < 3; ++a) p.angles[party][a] = x[3 + 3 * party + a];
  }
  return p;
}

std::vector<double> start_point(std::size_t restart, const FilterSearchOptions& opts) {
  const std::size_t dim = opts.include_unitaries ? 12 : 3;
  std::vector<double> x(dim, 0.0);
  if (restart == 0) return x;
  auto rng = restart_rng(opts.seed ^ 0x9e3779b97f4a7c15ULL, restart);
  std::uniform_real_distribution<double> logs(-3.0, 3.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < 3; ++i) x[i] = logs(rng);
  for (std::size_t i = 3; i < dim; ++i) x[i] = angle(rng);
  return x;
}

}  // namespace

FilterSearchResult optimize_filters(const DensityMatrix& rho, FilterObjective objective,
                                    const FilterSearchOptions& opts) {
  if (opts.restarts < 1) throw Error(ErrorKind::InvalidArgument, "restarts must be >= 1");
  FilterSearchResult result;
  result.trace.resize(opts.restarts);
  NelderMeadOptions nm;
  nm.initial_step = opts.initial_step;
  nm.diameter_tol = opts.diameter_tol;
  nm.max_iters = opts.max_iters;
  nm.stop_below = -opts.stop_above;

  auto run = [&](std::size_t r) {
    RestartLog& log = result.trace[r];
    log.restart = r;
    log.start = start_point(r, opts);
    const auto f = [&](const std::vector<double>& x) {
      return -filter_objective(rho, decode(x, opts).triple(), objective, opts);
    };
    const NelderMeadResult nmr = nelder_mead(f, log.start, nm);
    log.best_x = nmr.x;
    for (int i = 0; i < 3; ++i) log.best_x[i] = std::clamp(nmr.x[i], -opts.log_bound, opts.log_bound);
    log.value = -nmr.fx;
    log.iterations = nmr.iterations;
    log.evaluations = nmr.evaluations;
    log.converged = nmr.converged;
  };

  if (std::isinf(opts.stop_above)) {
    parallel_for(opts.restarts, opts.jobs, run);
  } else {
    const std::size_t batch = std::max(1u, opts.jobs);
    std::size_t done = 0;
    while (done < opts.restarts && !result.reached_target) {
      const std::size_t count = std::min(batch, opts.restarts - done);
      parallel_for(count, opts.jobs, [&](std::size_t i) { run(done + i); });
      for (std::size_t i = 0; i < count; ++i)
        if (result.trace[done + i].value > opts.stop_above) result.reached_target = true;
      done += count;
    }
    result.trace.resize(done);
  }

  for (std::size_t r = 1; r < result.trace.size(); ++r) {
    if (result.trace[r].value > result.trace[result.best_restart].value) result.best_restart = r;
  }
  const RestartLog& best = result.trace[result.best_restart];
  result.best = decode(best.best_x, opts);
  result.value = best.value;
  return result;
}

}  // namespace mermin
