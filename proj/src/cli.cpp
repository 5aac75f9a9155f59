#include "cosetlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosetlab/bounds.hpp"
#include "cosetlab/errors.hpp"
#include "cosetlab/group.hpp"
#include "cosetlab/measurements.hpp"
#include "cosetlab/qes.hpp"
#include "cosetlab/report.hpp"
#include "cosetlab/states.hpp"

namespace cosetlab {

namespace {

const std::vector<std::string> kCommands = {"verify", "csi-sweep", "tcs-sweep", "qes-security", "hn-check"};

Limits limits_for(const RunConfig& c) {
  Limits l;
  if (c.dense_cap) l.dense_cap = *c.dense_cap;
  return l;
}

// ---------------------------------------------------------------------------
// verify

struct LawResult {
  std::string law;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  double tolerance = 0.0;

  void record(double deviation) {
    ++cases;
    worst = std::max(worst, deviation);
    if (!(deviation <= tolerance)) ++failures;
  }
};

std::vector<LawResult> verify_laws(const GroupPtr& g, const std::optional<CandidateFamily>& family, const RunConfig& c,
                                   const Limits& limits) {
  const auto tol = [&](double d) { return c.tol ? *c.tol : d; };
  std::vector<LawResult> laws;
  const double order = static_cast<double>(g->order());

  LawResult assoc{"associativity", 0, 0, 0.0, 0.0};
  const std::size_t defects = g->associativity_defects();
  assoc.record(static_cast<double>(defects));
  laws.push_back(assoc);

  LawResult inverse{"inverse_identity", 0, 0, 0.0, 0.0};
  for (Element a = 0; a < g->order(); ++a) {
    const bool ok = g->mul(a, g->inverse(a)) == g->identity() && g->mul(g->identity(), a) == a &&
                    g->mul(a, g->identity()) == a;
    inverse.record(ok ? 0.0 : 1.0);
  }
  laws.push_back(inverse);

  const auto subs = all_subgroups(g, limits);
  LawResult lagrange{"lagrange", 0, 0, 0.0, 0.0};
  LawResult cosets{"coset_partition", 0, 0, 0.0, 0.0};
  LawResult entry{"entrywise_law", 0, 0, 0.0, tol(1e-12)};
  LawResult rank{"rank_law", 0, 0, 0.0, 0.0};
  LawResult norm{"operator_norm_law", 0, 0, 0.0, tol(1e-9)};
  LawResult trace{"unit_trace", 0, 0, 0.0, tol(1e-9)};
  LawResult standard{"standard_method_equivalence", 0, 0, 0.0, tol(1e-12)};
  LawResult relabel{"relabel_invariance", 0, 0, 0.0, tol(1e-12)};
  LawResult support{"support_projector_law", 0, 0, 0.0, tol(1e-8)};
  LawResult invsqrt{"inverse_sqrt_law", 0, 0, 0.0, tol(1e-8)};
  LawResult helst{"helstrom_identity", 0, 0, 0.0, tol(1e-8)};
  LawResult overlap_law{"overlap_law", 0, 0, 0.0, tol(1e-9)};
  LawResult proj_overlap{"projector_overlap_law", 0, 0, 0.0, tol(1e-8)};

  std::vector<DensityOperator> states;
  std::vector<Matrix> projectors;
  const DensityOperator mixed = maximally_mixed(g, limits);
  for (const auto& h : subs) {
    lagrange.record(g->order() % h.order() == 0 ? 0.0 : 1.0);

    const auto blocks = left_cosets(*g, h);
    std::vector<int> seen(g->order(), 0);
    bool ok = blocks.size() * h.order() == g->order() && blocks.front() == h.members();
    for (const auto& b : blocks) {
      ok = ok && b.size() == h.order();
      for (Element e : b) ++seen[e];
    }
    ok = ok && std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; });
    cosets.record(ok ? 0.0 : 1.0);

    const DensityOperator rho = coset_state(g, h, limits);
    const Matrix v = coset_basis(*g, h);
    const Matrix outer = (static_cast<double>(h.order()) / order) * v * v.adjoint();
    entry.record((rho.matrix() - outer).cwiseAbs().maxCoeff());
    rank.record(std::abs(static_cast<double>(numeric_rank(rho.op(), limits.rank_tol)) - order / static_cast<double>(h.order())));
    norm.record(std::abs(operator_norm(rho.op()) - static_cast<double>(h.order()) / order));
    trace.record(std::abs(rho.op().trace() - 1.0));

    const CosetOracle oracle = oracle_from_subgroup(g, h);
    standard.record((standard_method_state(oracle, limits).matrix() - rho.matrix()).cwiseAbs().maxCoeff());
    std::vector<std::uint32_t> reverse(g->order());
    for (std::size_t i = 0; i < reverse.size(); ++i) reverse[i] = static_cast<std::uint32_t>(reverse.size() - 1 - i);
    relabel.record((standard_method_state(oracle.relabel(reverse), limits).matrix() - rho.matrix()).cwiseAbs().maxCoeff());

    const SupportAndInvSqrt si = support_and_inv_sqrt(rho.op(), limits.rank_tol);
    support.record((si.support.op().matrix() * rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff());
    const Matrix r = si.inv_sqrt.matrix();
    invsqrt.record((r * r * rho.matrix() - si.support.op().matrix()).cwiseAbs().maxCoeff());

    const HelstromResult hr = helstrom(rho, mixed, "coset", "mixed");
    helst.record(std::abs(hr.measured - hr.success));

    states.push_back(rho);
    projectors.push_back(v * v.adjoint());
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (std::size_t j = 0; j < subs.size(); ++j) {
      const double gamma = static_cast<double>(intersection_size(subs[i], subs[j]));
      overlap_law.record(std::abs(overlap(states[i], states[j]) - gamma / order));
      const double pr = trace_product(projectors[i], states[j].matrix()).real();
      // P_H = (|G|/|H|) rho_H, so tr(P_H rho_H') = gamma / |H|.
      proj_overlap.record(std::abs(pr - gamma / static_cast<double>(subs[i].order())));
    }
  }
  for (auto* l : {&lagrange, &cosets, &entry, &rank, &norm, &trace, &standard, &relabel, &support, &invsqrt, &helst,
                  &overlap_law, &proj_overlap})
    laws.push_back(*l);

  if (family) {
    LawResult complete{"pgm_completeness", 0, 0, 0.0, tol(1e-8)};
    LawResult psd{"pgm_element_psd", 0, 0, 0.0, tol(1e-8)};
    LawResult pgm_cap{"pgm_error_cap", 0, 0, 0.0, tol(1e-8)};
    LawResult tcs_accept{"tcs_member_acceptance", 0, 0, 0.0, tol(1e-8)};
    const POVM povm = pgm_projective(*family, 1, limits);
    complete.record(povm.completeness_defect());
    psd.record(std::max(0.0, -povm.min_eigenvalue()));
    if (family->size() >= 2) {
      const auto success = member_success(povm, *family, 1, limits);
      const auto caps = pgm_error_cap(*family, 1);
      for (std::size_t i = 0; i < success.size(); ++i) pgm_cap.record(std::max(0.0, 1.0 - success[i] - caps.per_member[i]));
    }
    const POVM tcs = tcs_projector_povm(*family, 1, limits);
    for (std::size_t i = 0; i < family->size(); ++i)
      tcs_accept.record(std::abs(measure(tcs, family_state(*family, i, 1, limits)).probability("nontrivial") - 1.0));
    for (auto* l : {&complete, &psd, &pgm_cap, &tcs_accept}) laws.push_back(*l);
  }
  return laws;
}

std::string laws_csv(const std::vector<LawResult>& laws) {
  std::string out = "law,cases,failures,worst_deviation,tolerance,status\n";
  for (const auto& l : laws)
    out += l.law + ',' + std::to_string(l.cases) + ',' + std::to_string(l.failures) + ',' + format_number(l.worst) + ',' +
           format_number(l.tolerance) + ',' + (l.failures ? "fail" : "pass") + '\n';
  return out;
}

nlohmann::json laws_json(const GroupPtr& g, std::size_t subgroups, const std::vector<LawResult>& laws) {
  nlohmann::json j;
  j["group"] = g->recipe().to_string();
  j["order"] = g->order();
  j["subgroups"] = subgroups;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : laws)
    arr.push_back({{"law", l.law},
                   {"cases", l.cases},
                   {"failures", l.failures},
                   {"worst_deviation", l.worst},
                   {"tolerance", l.tolerance},
                   {"status", l.failures ? "fail" : "pass"}});
  j["laws"] = std::move(arr);
  return j;
}

// ---------------------------------------------------------------------------

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + c.out + "'");
  f << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::optional<CandidateFamily> family_for(const RunConfig& c, const GroupPtr& g, const Limits& limits) {
  if (c.family.empty()) return std::nullopt;
  return candidate_family(g, FamilySpec::parse(c.family), limits);
}

int run_verify(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const Limits limits = limits_for(c);
  const GroupPtr g = make_group(GroupRecipe::parse(c.group), limits);
  const auto family = family_for(c, g, limits);
  const auto laws = verify_laws(g, family, c, limits);
  const std::size_t subgroups = all_subgroups(g, limits).size();
  emit(c, c.format == "json" ? dump(laws_json(g, subgroups, laws)) : laws_csv(laws), out);
  const auto failed = std::count_if(laws.begin(), laws.end(), [](const LawResult& l) { return l.failures > 0; });
  log << "verify " << g->recipe().to_string() << ": " << laws.size() - static_cast<std::size_t>(failed) << "/"
      << laws.size() << " laws passed over " << subgroups << " subgroups\n";
  return failed ? kExitAssertion : kExitOk;
}

int run_sweep(const RunConfig& c, bool csi, std::ostream& out, std::ostream& log) {
  const Limits limits = limits_for(c);
  const GroupPtr g = make_group(GroupRecipe::parse(c.group), limits);
  const auto family = family_for(c, g, limits);
  if (!family) throw UsageError(c.command + " needs --family");
  SweepOptions opt;
  opt.measure_pgm = csi;
  opt.measure_tcs = !csi;
  opt.workers = c.workers;
  opt.path = parse_compute_path(c.path);
  opt.limits = limits;
  if (c.tol) opt.slack = *c.tol;
  const auto rows = sweep(*family, c.k_min, c.k_max, opt);
  emit(c, c.format == "json" ? dump(sweep_json(*family, rows)) : sweep_csv(rows), out);
  const auto bad = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.has_violation(); });
  log << c.command << " " << family->describe() << ": " << rows.size() << " rows, " << bad << " with violations\n";
  return bad ? kExitAssertion : kExitOk;
}

int run_qes(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const Limits limits = limits_for(c);
  const QesScheme scheme(QesParams{c.n, c.m}, limits);
  SecurityOptions opt;
  opt.path = parse_compute_path(c.path);
  if (c.tol) opt.slack = *c.tol;
  const SecurityReport r = indistinguishability_norms(scheme, c.k, opt);

  // Protocol round trip with a seeded key.
  const Permutation key = scheme.keygen(c.seed);
  bool round_trip = true;
  for (int s = 0; s < c.m; ++s) round_trip = round_trip && scheme.decrypt(key, scheme.encrypt(key, s)).message == s;

  nlohmann::json j = security_json(r);
  j["seed"] = c.seed;
  j["sample_key"] = to_cycle_string(key);
  j["round_trip"] = round_trip;
  std::string text;
  if (c.format == "json") {
    text = dump(j);
  } else {
    text = "quantity,value\n";
    for (std::size_t s = 0; s < r.l.size(); ++s) text += "l_" + std::to_string(s) + ',' + format_number(r.l[s]) + '\n';
    for (std::size_t s = 0; s < r.pairwise.size(); ++s)
      for (std::size_t t = s + 1; t < r.pairwise.size(); ++t)
        text += "pairwise_" + std::to_string(s) + "_" + std::to_string(t) + ',' + format_number(r.pairwise[s][t]) + '\n';
    text += "bound," + format_number(r.bound.bound) + '\n';
    text += "key_count," + std::to_string(r.bound.key_count) + '\n';
    text += "stirling_estimate," + format_number(r.bound.stirling_keys) + '\n';
    text += "symmetry_defect," + format_number(r.symmetry_defect) + '\n';
    if (r.l0_cross_check) text += "l_0_" + r.cross_check_path + ',' + format_number(*r.l0_cross_check) + '\n';
    text += std::string("round_trip,") + (round_trip ? "1" : "0") + '\n';
  }
  emit(c, text, out);
  log << "qes-security n=" << c.n << " m=" << c.m << " k=" << c.k << ": l_0=" << format_number(r.l0())
      << " bound=" << format_number(r.bound.bound) << (r.bound.vacuous ? " (vacuous)" : "") << "\n";
  return (r.has_violation() || !round_trip) ? kExitAssertion : kExitOk;
}

int run_hn(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const double tol = c.tol ? *c.tol : 1e-9;
  const HnTrialSummary s = hn_random_trials(c.trials, c.dim_min, c.dim_max, c.seed, tol);
  std::string text;
  if (c.format == "json") {
    nlohmann::json j{{"trials", s.trials}, {"passed", s.passed}, {"min_witness", s.min_witness},
                     {"tolerance", tol},   {"seed", c.seed},      {"dim_min", c.dim_min},
                     {"dim_max", c.dim_max}};
    text = dump(j);
  } else {
    text = "trials,passed,min_witness,tolerance\n" + std::to_string(s.trials) + ',' + std::to_string(s.passed) + ',' +
           format_number(s.min_witness) + ',' + format_number(tol) + '\n';
  }
  emit(c, text, out);
  log << s.passed << "/" << s.trials << " passed, min witness " << format_number(s.min_witness) << " (threshold -"
      << format_number(tol) << ")\n";
  return s.passed == s.trials ? kExitOk : kExitAssertion;
}

void apply_json(RunConfig& c, const nlohmann::json& j, const CLI::App& app) {
  const auto given = [&](const std::string& flag) {
    const CLI::Option* opt = app.get_option_no_throw("--" + flag);
    return opt != nullptr && opt->count() > 0;
  };
  for (const auto& [key, value] : j.items()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (key == "command") continue;
    if (flag != "config" && given(flag)) continue;
    try {
      if (flag == "group") c.group = value.get<std::string>();
      else if (flag == "family") c.family = value.get<std::string>();
      else if (flag == "k-min") c.k_min = value.get<int>();
      else if (flag == "k-max") c.k_max = value.get<int>();
      else if (flag == "seed") c.seed = value.get<std::uint64_t>();
      else if (flag == "out") c.out = value.get<std::string>();
      else if (flag == "format") c.format = value.get<std::string>();
      else if (flag == "dense-cap") c.dense_cap = value.get<std::size_t>();
      else if (flag == "tol") c.tol = value.get<double>();
      else if (flag == "workers") c.workers = value.get<int>();
      else if (flag == "path") c.path = value.get<std::string>();
      else if (flag == "n") c.n = value.get<int>();
      else if (flag == "m") c.m = value.get<int>();
      else if (flag == "k") c.k = value.get<int>();
      else if (flag == "trials") c.trials = value.get<std::size_t>();
      else if (flag == "dim-min") c.dim_min = value.get<std::size_t>();
      else if (flag == "dim-max") c.dim_max = value.get<std::size_t>();
      else throw UsageError("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config key '" + key + "' has the wrong type");
    }
  }
}

}  // namespace

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw UsageError("unknown command '" + command + "'");
  if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
  if (tol && !(*tol > 0.0)) throw UsageError("--tol must be positive");
  if (dense_cap && *dense_cap == 0) throw UsageError("--dense-cap must be positive");
  if (workers < 1) throw UsageError("--workers must be at least 1");
  parse_compute_path(path);
  if (command == "verify" || command == "csi-sweep" || command == "tcs-sweep") {
    if (group.empty()) throw UsageError(command + " needs --group");
    GroupRecipe::parse(group);
    if (!family.empty()) FamilySpec::parse(family);
  }
  if (command == "csi-sweep" || command == "tcs-sweep") {
    if (family.empty()) throw UsageError(command + " needs --family");
    if (k_min < 0 || k_min > k_max) throw UsageError("k range must satisfy 0 <= k-min <= k-max");
  }
  if (command == "qes-security") {
    QesParams{n, m}.validate();
    if (k < 0) throw UsageError("--k must be nonnegative");
  }
  if (command == "hn-check") {
    if (trials == 0) throw UsageError("--trials must be positive");
    if (dim_min < 1 || dim_min > dim_max) throw UsageError("need 1 <= dim-min <= dim-max");
  }
}

std::optional<RunConfig> parse_run_config(const std::vector<std::string>& args, std::ostream& out) {
  RunConfig c;
  CLI::App app{"Coset-state measurement laboratory"};
  app.require_subcommand(1);
  std::string config_path;
  std::size_t dense_cap = 0;
  double tol = 0.0;
  app.add_option("--config", config_path, "JSON file with default settings (flags override it)");
  app.add_option("--group", c.group, "group recipe, e.g. \"kind=dihedral n=6\"");
  app.add_option("--family", c.family, "candidate family, e.g. \"kind=sdp\"");
  app.add_option("--k-min", c.k_min, "first number of copies");
  app.add_option("--k-max", c.k_max, "last number of copies");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--out", c.out, "output file (default: standard output)");
  app.add_option("--format", c.format, "csv or json");
  app.add_option("--dense-cap", dense_cap, "largest dense operator dimension");
  app.add_option("--tol", tol, "tolerance for asserted inequalities");
  app.add_option("--workers", c.workers, "parallel sweep workers");
  app.add_option("--path", c.path, "automatic, dense, gram or block");
  app.add_option("--n", c.n, "QES security parameter");
  app.add_option("--m", c.m, "QES message parameter");
  app.add_option("--k", c.k, "QES copies of the encryption-key state");
  app.add_option("--trials", c.trials, "random trials for hn-check");
  app.add_option("--dim-min", c.dim_min, "smallest dimension for hn-check");
  app.add_option("--dim-max", c.dim_max, "largest dimension for hn-check");
  for (const auto& name : kCommands) app.add_subcommand(name)->fallthrough();

  // CLI11 consumes arguments from the back of the vector.
  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  c.command = app.get_subcommands().front()->get_name();
  if (app.count("--dense-cap")) c.dense_cap = dense_cap;
  if (app.count("--tol")) c.tol = tol;
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw UsageError("cannot open config file '" + config_path + "'");
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file '" + config_path + "' is not valid JSON");
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    if (j.contains("command") && j["command"] != c.command)
      throw UsageError("config file is for command '" + j["command"].get<std::string>() + "'");
    apply_json(c, j, app);
  }
  c.validate();
  return c;
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& log) {
  if (c.command == "verify") return run_verify(c, out, log);
  if (c.command == "csi-sweep") return run_sweep(c, true, out, log);
  if (c.command == "tcs-sweep") return run_sweep(c, false, out, log);
  if (c.command == "qes-security") return run_qes(c, out, log);
  if (c.command == "hn-check") return run_hn(c, out, log);
  throw UsageError("unknown command '" + c.command + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log) {
  try {
    const auto config = parse_run_config(args, out);
    if (!config) return kExitOk;
    return execute(*config, out, log);
  } catch (const CapacityError& e) {
    log << "capacity exceeded: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConstructionError& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
}

}  // namespace cosetlab
