#include "mermin/oracle.hpp"

#include <array>
#include <cmath>
#include <span>

#include "mermin/parallel.hpp"
#include "mermin/random.hpp"

namespace mermin {

namespace {

// One product term coeff * A_sa (x) B_sb (x) C_sc of a two-setting operator.
struct Term {
  int sa, sb, sc;
  double coeff;
};

constexpr std::array<Term, 4> kMerminTerms{{{0, 0, 1, 1.0}, {0, 1, 0, 1.0}, {1, 0, 0, 1.0},
                                             {1, 1, 1, -1.0}}};
constexpr std::array<Term, 8> kSvetlichnyTerms{{{0, 0, 0, 1.0}, {0, 0, 1, 1.0}, {0, 1, 0, 1.0},
                                                 {0, 1, 1, -1.0}, {1, 0, 0, 1.0}, {1, 0, 1, -1.0},
                                                 {1, 1, 0, -1.0}, {1, 1, 1, -1.0}}};

using Vec3 = std::array<double, 3>;
// vectors[2 * party + setting]
using Settings6 = std::array<Vec3, 6>;

const BlochVector& setting(const MeasurementSettings& s, int party, int which) {
  const BlochVector* table[6] = {&s.a, &s.a_prime, &s.b, &s.b_prime, &s.c, &s.c_prime};
  return *table[2 * party + which];
}

ComplexMatrix build_operator(const MeasurementSettings& s, std::span<const Term> terms) {
  ComplexMatrix op(8, 8);
  for (const Term& t : terms) {
    op += kron3(bloch_observable(setting(s, 0, t.sa)), bloch_observable(setting(s, 1, t.sb)),
                bloch_observable(setting(s, 2, t.sc))) *
          cplx(t.coeff);
  }
  return op;
}

// Tr[rho sigma_i (x) sigma_j (x) sigma_k] read off the matrix entries: a Pauli
// string maps |a> to a phase times |a xor flips>, so each trace is an 8-term sum.
std::array<double, 27> pauli_components(const ComplexMatrix& rho) {
  std::array<double, 27> t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const int ops[3] = {i, j, k};
        cplx acc{};
        for (int a = 0; a < 8; ++a) {
          int b = a;
          cplx phase = 1.0;
          for (int q = 0; q < 3; ++q) {
            const int shift = 2 - q;
            const int bit = (a >> shift) & 1;
            switch (ops[q]) {
              case 0: b ^= 1 << shift; break;
              case 1:
                b ^= 1 << shift;
                phase *= bit == 0 ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
                break;
              default: phase *= bit == 0 ? 1.0 : -1.0; break;
            }
          }
          // <b| P |a> = phase, so Tr[rho P] = sum_a rho(a, b) * phase.
          acc += rho(a, b) * phase;
        }
        t[9 * i + 3 * j + k] = acc.real();
      }
  return t;
}

double form_value(const std::array<double, 27>& t, std::span<const Term> terms,
                  const Settings6& v) {
  double total = 0.0;
  for (const Term& term : terms) {
    const Vec3& a = v[term.sa];
    const Vec3& b = v[2 + term.sb];
    const Vec3& c = v[4 + term.sc];
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) s += t[9 * i + 3 * j + k] * a[i] * b[j] * c[k];
    total += term.coeff * s;
  }
  return total;
}

// Gradient of the multilinear form with respect to vector `slot`.
Vec3 form_gradient(const std::array<double, 27>& t, std::span<const Term> terms,
                   const Settings6& v, int slot) {
  const int party = slot / 2;
  const int which = slot % 2;
  Vec3 g{};
  for (const Term& term : terms) {
    const int sel[3] = {term.sa, term.sb, term.sc};
    if (sel[party] != which) continue;
    const Vec3& a = v[sel[0]];
    const Vec3& b = v[2 + sel[1]];
    const Vec3& c = v[4 + sel[2]];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const double x = term.coeff * t[9 * i + 3 * j + k];
          if (party == 0) g[i] += x * b[j] * c[k];
          else if (party == 1) g[j] += x * a[i] * c[k];
          else g[k] += x * a[i] * b[j];
        }
  }
  return g;
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n > 1e-12) return {v[0] / n, v[1] / n, v[2] / n};
  }
}

struct RestartOutcome {
  double value = -INFINITY;
  Settings6 vectors{};
  std::size_t sweeps = 0;
};

RestartOutcome ascend(const std::array<double, 27>& t, std::span<const Term> terms,
                      std::mt19937_64 rng, const OracleOptions& opts, std::vector<double>* history) {
  RestartOutcome out;
  for (Vec3& v : out.vectors) v = random_unit(rng);
  double value = form_value(t, terms, out.vectors);
  if (history) history->push_back(value);
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const double before = value;
    for (int slot = 0; slot < 6; ++slot) {
      const Vec3 g = form_gradient(t, terms, out.vectors, slot);
      const double n = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
      // Zero gradient: every direction is optimal, keep the current vector.
      if (n > 1e-15) out.vectors[slot] = {g[0] / n, g[1] / n, g[2] / n};
      if (history) {
        value = form_value(t, terms, out.vectors);
        history->push_back(value);
      }
    }
    value = form_value(t, terms, out.vectors);
    ++out.sweeps;
    if (std::abs(value - before) < opts.tol) break;
  }
  out.value = value;
  return out;
}

MeasurementSettings to_settings(const Settings6& v) {
  auto bv = [](const Vec3& x) { return BlochVector::normalized(x[0], x[1], x[2]); };
  return {bv(v[0]), bv(v[1]), bv(v[2]), bv(v[3]), bv(v[4]), bv(v[5])};
}

OracleResult maximize(const DensityMatrix& rho, std::span<const Term> terms,
                      const OracleOptions& opts) {
  const auto t = pauli_components(rho.matrix());
  const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
  std::vector<RestartOutcome> outcomes(restarts);
  parallel_for(restarts, opts.jobs, [&](std::size_t r) {
    outcomes[r] = ascend(t, terms, restart_rng(opts.seed, r), opts, r == 0 ? opts.history : nullptr);
  });

  OracleResult result;
  result.restarts_used = restarts;
  std::size_t best = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    result.iterations += outcomes[r].sweeps;
    if (outcomes[r].value > outcomes[best].value) best = r;
  }
  // The maximum of |<op>| equals the maximum of <op>: negating a and a'
  // flips the sign of every term.
  result.settings = to_settings(outcomes[best].vectors);
  const double direct =
      expectation(rho, build_operator(result.settings, terms));
  result.value = std::abs(direct);
  return result;
}

}  // namespace

ComplexMatrix mermin_operator(const MeasurementSettings& s) { return build_operator(s, kMerminTerms); }

double mermin_expectation(const DensityMatrix& rho, const MeasurementSettings& s) {
  return expectation(rho, mermin_operator(s));
}

OracleResult maximize_mermin(const DensityMatrix& rho, const OracleOptions& opts) {
  return maximize(rho, kMerminTerms, opts);
}

OracleResult maximize_mermin(const DensityMatrix& rho, std::uint64_t seed, std::size_t restarts) {
  OracleOptions opts;
  opts.seed = seed;
  opts.restarts = restarts;
  return maximize_mermin(rho, opts);
}

ComplexMatrix svetlichny_operator(const MeasurementSettings& s) {
  return build_operator(s, kSvetlichnyTerms);
}

double svetlichny_expectation(const DensityMatrix& rho, const MeasurementSettings& s) {
  return expectation(rho, svetlichny_operator(s));
}

OracleResult maximize_svetlichny(const DensityMatrix& rho, const OracleOptions& opts) {
  return maximize(rho, kSvetlichnyTerms, opts);
}

OracleResult maximize_svetlichny(const DensityMatrix& rho, std::uint64_t seed,
                                 std::size_t restarts) {
  OracleOptions opts;
  opts.seed = seed;
  opts.restarts = restarts;
  return maximize_svetlichny(rho, opts);
}

}  // namespace mermin
