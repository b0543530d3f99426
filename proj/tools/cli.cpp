#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mermin/correlation.hpp"
#include "mermin/error.hpp"
#include "mermin/filtering.hpp"
#include "mermin/oracle.hpp"
#include "mermin/simd/kernels.hpp"
#include "mermin/states.hpp"
#include "mermin/thresholds.hpp"

namespace mermin::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kTightTol = 1e-4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::string verb;
  std::string state = "ghz";
  std::optional<double> p;
  std::optional<double> gamma;
  std::string path;
  std::string filter;
  std::string filter_file;
  std::string mode = "unfiltered";
  std::string certify = "oracle";
  std::string objective = "pair";
  std::string inequality = "mermin";
  std::size_t restarts = 32;
  std::size_t filter_restarts = 20;
  std::size_t iters = 5000;
  std::uint64_t seed = 0;
  double tol = 1e-4;
  std::string range = "0:1:0.05";
  std::string out;
  std::string format;
  bool include_unitaries = false;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("--state", a.state, "ghz | noisy-ghz | psi-pi8 | ad-ghz | file")
      ->check(CLI::IsMember({"ghz", "noisy-ghz", "psi-pi8", "ad-ghz", "file"}));
  cmd->add_option("--p", a.p, "mixing parameter for noisy-ghz / psi-pi8");
  cmd->add_option("--gamma", a.gamma, "damping rate for ad-ghz");
  cmd->add_option("--path", a.path, "state file for --state file");
  cmd->add_option("--filter", a.filter, "diagonal filter l,m,n");
  cmd->add_option("--filter-file", a.filter_file, "file with three 2x2 PSD filters");
  cmd->add_option("--mode", a.mode)->check(CLI::IsMember({"unfiltered", "filtered"}));
  cmd->add_option("--certify", a.certify)->check(CLI::IsMember({"bound", "oracle"}));
  cmd->add_option("--objective", a.objective, "filter search objective")
      ->check(CLI::IsMember({"pair", "oracle"}));
  cmd->add_option("--inequality", a.inequality)->check(CLI::IsMember({"mermin", "svetlichny"}));
  cmd->add_option("--restarts", a.restarts, "oracle restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--filter-restarts", a.filter_restarts)->check(CLI::PositiveNumber);
  cmd->add_option("--iters", a.iters, "Nelder-Mead iteration cap per restart");
  cmd->add_option("--seed", a.seed);
  cmd->add_option("--tol", a.tol)->check(CLI::PositiveNumber);
  cmd->add_option("--range", a.range, "lo:hi:step");
  cmd->add_option("--out", a.out, "write the report here instead of stdout");
  cmd->add_option("--format", a.format)->check(CLI::IsMember({"csv", "json", "text"}));
  cmd->add_flag("--include-unitaries", a.include_unitaries);
  cmd->add_option("--jobs", a.jobs)->check(CLI::PositiveNumber);
}

FamilyKind family_of(const Args& a) { return parse_family(a.state); }

double family_param(const Args& a) {
  const FamilyKind kind = family_of(a);
  if (kind == FamilyKind::ad_ghz) {
    if (!a.gamma) throw UsageError("--state ad-ghz needs --gamma");
    return *a.gamma;
  }
  if (kind == FamilyKind::noisy_ghz || kind == FamilyKind::psi_pi8) {
    if (!a.p) throw UsageError("--state " + a.state + " needs --p");
    return *a.p;
  }
  return 1.0;
}

DensityMatrix load(const Args& a) {
  if (family_of(a) == FamilyKind::file) {
    if (a.path.empty()) throw UsageError("--state file needs --path");
    return load_state(a.path);
  }
  return build_state(family_of(a), family_param(a));
}

json state_json(const Args& a) {
  json j;
  j["family"] = a.state;
  const FamilyKind kind = family_of(a);
  if (kind == FamilyKind::file) j["path"] = a.path;
  if (kind == FamilyKind::noisy_ghz || kind == FamilyKind::psi_pi8) j["p"] = a.p.value_or(NAN);
  if (kind == FamilyKind::ad_ghz) j["gamma"] = a.gamma.value_or(NAN);
  return j;
}

json header(const Args& a) {
  json j;
  j["tool"] = "mermin";
  j["verb"] = a.verb;
  j["seed"] = a.seed;
  j["restarts"] = a.restarts;
  return j;
}

OracleOptions oracle_opts(const Args& a) {
  OracleOptions o;
  o.seed = a.seed;
  o.restarts = a.restarts;
  o.jobs = a.jobs;
  return o;
}

FilterSearchOptions filter_opts(const Args& a) {
  FilterSearchOptions f;
  f.seed = a.seed;
  f.restarts = a.filter_restarts;
  f.max_iters = a.iters;
  f.include_unitaries = a.include_unitaries;
  f.jobs = a.jobs;
  return f;
}

EvaluationOptions eval_opts(const Args& a) {
  EvaluationOptions e;
  e.seed = a.seed;
  e.oracle_restarts = a.restarts;
  e.filter = filter_opts(a);
  e.filter.jobs = 1;
  return e;
}

json settings_json(const MeasurementSettings& s) {
  auto v = [](const BlochVector& b) { return json::array({b.x, b.y, b.z}); };
  return json{{"a", v(s.a)},         {"a_prime", v(s.a_prime)}, {"b", v(s.b)},
              {"b_prime", v(s.b_prime)}, {"c", v(s.c)},       {"c_prime", v(s.c_prime)}};
}

json pair_json(const PairBound& p) {
  return json{{"value", p.value}, {"pair_is_max", p.pair_is_max},
              {"degeneracy_gap", p.degeneracy_gap}};
}

json values_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

FilterTriple parse_filter_triple(const Args& a) {
  if (!a.filter.empty() && !a.filter_file.empty()) {
    throw UsageError("use only one of --filter and --filter-file");
  }
  if (!a.filter.empty()) {
    std::vector<double> lmn;
    std::stringstream ss(a.filter);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        lmn.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("--filter expects l,m,n, got '" + a.filter + "'");
      }
    }
    if (lmn.size() != 3) throw UsageError("--filter expects three values l,m,n");
    return FilterTriple::diagonal(lmn[0], lmn[1], lmn[2]);
  }
  if (!a.filter_file.empty()) {
    std::ifstream in(a.filter_file);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + a.filter_file);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ParseError, e.what());
    }
    if (!doc.is_object() || !doc.contains("filters") || !doc["filters"].is_array() ||
        doc["filters"].size() != 3) {
      throw Error(ErrorKind::ParseError, "filter file needs \"filters\": [F_A, F_B, F_C]");
    }
    std::array<LocalFilter, 3> f;
    for (int i = 0; i < 3; ++i) {
      const nlohmann::json wrapped{{"dim", 2}, {"matrix", doc["filters"][i]}};
      f[i] = filter_normal_form(parse_matrix_text(wrapped.dump(), 2));
    }
    return {f[0], f[1], f[2]};
  }
  throw UsageError("filtered-bound needs --filter l,m,n or --filter-file");
}

json filter_json(const FilterTriple& f) {
  json parties = json::array();
  for (const LocalFilter* lf : {&f.a, &f.b, &f.c}) {
    json u = json::array();
    for (std::size_t r = 0; r < 2; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < 2; ++c)
        row.push_back(json::array({lf->unitary()(r, c).real(), lf->unitary()(r, c).imag()}));
      u.push_back(row);
    }
    parties.push_back(json{{"l", lf->l()}, {"unitary", u}});
  }
  return parties;
}

double oracle_for(const Args& a, const DensityMatrix& rho) {
  return maximize_mermin(rho, oracle_opts(a)).value;
}

void finish(json& report, double bound, double oracle) {
  report["bound"] = bound;
  report["oracle"] = oracle;
  report["tight"] = std::abs(bound - oracle) <= kTightTol;
  report["violation"] = oracle > kMerminLocalBound + kViolationMargin;
}

json cmd_bound(const Args& a) {
  const DensityMatrix rho = load(a);
  const SingularTriple s = singular_triple(fold(correlation_tensor(rho)));
  json r = header(a);
  r["state"] = state_json(a);
  r["singular_values"] = values_json(s.values);
  r["pair"] = pair_json(pair_bound(s));
  finish(r, mermin_bound(s), oracle_for(a, rho));
  return r;
}

json cmd_filtered_bound(const Args& a) {
  const DensityMatrix rho = load(a);
  const FilterTriple f = parse_filter_triple(a);
  const FilteredBoundReport rep = theorem_bound(rho, f);
  const FilteredState fs = apply_filters(rho, f);
  json r = header(a);
  r["state"] = state_json(a);
  r["filter"] = filter_json(f);
  r["normalization"] = rep.normalization;
  r["singular_values"] = values_json(rep.singular_values);
  r["pair"] = pair_json(rep.pair);
  finish(r, rep.bound, oracle_for(a, fs.rho_prime));
  return r;
}

json cmd_oracle(const Args& a) {
  const DensityMatrix rho = load(a);
  const bool svet = a.inequality == "svetlichny";
  const OracleResult res =
      svet ? maximize_svetlichny(rho, oracle_opts(a)) : maximize_mermin(rho, oracle_opts(a));
  json r = header(a);
  r["state"] = state_json(a);
  r["inequality"] = a.inequality;
  r["value"] = res.value;
  r["local_bound"] = svet ? kSvetlichnyLocalBound : kMerminLocalBound;
  r["settings"] = settings_json(res.settings);
  r["iterations"] = res.iterations;
  r["restarts_used"] = res.restarts_used;
  const double bound = mermin_bound(rho);
  if (svet) {
    r["violation"] = res.value > kSvetlichnyLocalBound + kViolationMargin;
  } else {
    finish(r, bound, res.value);
  }
  return r;
}

json cmd_optimize_filter(const Args& a) {
  const DensityMatrix rho = load(a);
  const FilterObjective objective =
      a.objective == "oracle" ? FilterObjective::oracle : FilterObjective::pair_bound;
  const FilterSearchResult res = optimize_filters(rho, objective, filter_opts(a));
  const FilterParams best = std::isfinite(res.value) ? res.best : FilterParams{};
  const FilterTriple triple = best.triple();
  json r = header(a);
  r["state"] = state_json(a);
  r["objective"] = a.objective;
  r["include_unitaries"] = a.include_unitaries;
  r["filter_restarts"] = a.filter_restarts;
  r["value"] = res.value;
  r["best_restart"] = res.best_restart;
  r["lmn"] = values_json(best.lmn());
  json angles = json::array();
  for (const auto& p : best.angles) angles.push_back(values_json(p));
  r["angles"] = angles;
  r["filter"] = filter_json(triple);
  json trace = json::array();
  for (const RestartLog& log : res.trace) {
    trace.push_back(json{{"restart", log.restart},
                         {"value", log.value},
                         {"iterations", log.iterations},
                         {"evaluations", log.evaluations},
                         {"converged", log.converged}});
  }
  r["trace"] = trace;
  finish(r, theorem_bound(rho, triple).bound, oracle_for(a, apply_filters(rho, triple).rho_prime));
  return r;
}

json cmd_threshold(const Args& a) {
  ThresholdOptions opts;
  opts.tol = a.tol;
  opts.certify = parse_certifier(a.certify);
  opts.eval = eval_opts(a);
  opts.jobs = a.jobs;
  const FamilyKind family = family_of(a);
  const Mode mode = parse_mode(a.mode);
  const ThresholdResult res = critical_param(family, mode, opts);

  json r = header(a);
  r["state"] = json{{"family", a.state}};
  r["mode"] = a.mode;
  r["certify"] = a.certify;
  r["include_unitaries"] = a.include_unitaries;
  r["tol"] = a.tol;
  r["critical"] = res.critical;
  r["bracket"] = json::array({res.lo, res.hi});
  r["violation_above"] = res.violation_above;
  r["bracket_verified"] = res.bracket_verified;
  r["evaluations"] = res.evaluations;
  json grid = json::array();
  for (const auto& [p, v] : res.grid) grid.push_back(json::array({p, v}));
  r["grid"] = grid;
  // Bound and oracle on the violating side of the bracket.
  const double side = res.violation_above ? res.hi : res.lo;
  const PointEvaluation ev = evaluate_point(build_state(family, side), opts.eval,
                                            mode == Mode::filtered);
  r["at_bracket"] = side;
  finish(r, ev.bound_filtered, ev.oracle_filtered);
  return r;
}

json sweep_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const SweepRow& row : rows) {
    json angles = json::array();
    for (const auto& p : row.angles) angles.push_back(values_json(p));
    arr.push_back(json{{"param", row.param},
                       {"bound_unfiltered", row.bound_unfiltered},
                       {"bound_filtered", row.bound_filtered},
                       {"oracle_unfiltered", row.oracle_unfiltered},
                       {"oracle_filtered", row.oracle_filtered},
                       {"violation_unfiltered", row.violation_unfiltered},
                       {"violation_filtered", row.violation_filtered},
                       {"tight_unfiltered",
                        std::abs(row.bound_unfiltered - row.oracle_unfiltered) <= kTightTol},
                       {"tight_filtered",
                        std::abs(row.bound_filtered - row.oracle_filtered) <= kTightTol},
                       {"lmn", values_json(row.lmn)},
                       {"angles", angles}});
  }
  return arr;
}

std::array<double, 3> parse_range(const std::string& text) {
  std::array<double, 3> v{};
  std::stringstream ss(text);
  std::string item;
  int n = 0;
  while (std::getline(ss, item, ':')) {
    if (n == 3) throw UsageError("--range expects lo:hi:step");
    try {
      v[n++] = std::stod(item);
    } catch (const std::exception&) {
      throw UsageError("--range expects lo:hi:step, got '" + text + "'");
    }
  }
  if (n != 3) throw UsageError("--range expects lo:hi:step");
  if (!(v[0] < v[1]) || !(v[2] > 0.0)) throw UsageError("--range needs lo < hi and step > 0");
  return v;
}

void text_lines(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      text_lines(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else {
    out << prefix << ": " << j.dump() << "\n";
  }
}

void emit(const json& report, const std::string& format, std::ostream& out) {
  if (format == "text") {
    text_lines(report, "", out);
  } else {
    out << report.dump(2) << "\n";
  }
}

int dispatch(const Args& a, std::ostream& out) {
  std::ostringstream buf;
  const std::string format = a.format.empty() ? (a.verb == "sweep" ? "csv" : "json") : a.format;
  if (format == "csv" && a.verb != "sweep") throw UsageError("--format csv applies to sweep only");

  if (a.verb == "validate") {
    const DensityMatrix rho = load(a);
    json r = header(a);
    r["state"] = state_json(a);
    r["valid"] = true;
    r["trace"] = rho.matrix().trace().real();
    r["min_eigenvalue"] = eig_hermitian(rho.matrix()).values.front();
    r["purity"] = rho.purity();
    r["simd_backend"] = std::string(simd::backend_name(simd::active_backend()));
    emit(r, format, buf);
  } else if (a.verb == "bound") {
    emit(cmd_bound(a), format, buf);
  } else if (a.verb == "filtered-bound") {
    emit(cmd_filtered_bound(a), format, buf);
  } else if (a.verb == "oracle") {
    emit(cmd_oracle(a), format, buf);
  } else if (a.verb == "optimize-filter") {
    emit(cmd_optimize_filter(a), format, buf);
  } else if (a.verb == "threshold") {
    emit(cmd_threshold(a), format, buf);
  } else if (a.verb == "sweep") {
    const auto [lo, hi, step] = parse_range(a.range);
    SweepOptions so;
    so.eval = eval_opts(a);
    so.jobs = a.jobs;
    const auto rows = sweep(family_of(a), lo, hi, step, so);
    if (format == "csv") {
      buf << sweep_csv(rows);
    } else {
      json r = header(a);
      r["state"] = json{{"family", a.state}};
      r["include_unitaries"] = a.include_unitaries;
      r["rows"] = sweep_json(rows);
      emit(r, format, buf);
    }
  }

  if (a.out.empty()) {
    out << buf.str();
  } else {
    std::ofstream file(a.out);
    if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + a.out);
    file << buf.str();
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mermin-operator bounds under local filtering for three-qubit states", "mermin"};
  app.require_subcommand(1);
  Args a;
  for (const char* verb :
       {"bound", "filtered-bound", "oracle", "optimize-filter", "threshold", "sweep", "validate"}) {
    add_common(app.add_subcommand(verb), a);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  a.verb = app.get_subcommands().front()->get_name();

  try {
    return dispatch(a, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mermin::cli
