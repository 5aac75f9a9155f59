// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path to the cosetlab CLI>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cosetlab/bounds.hpp"
#include "cosetlab/measurements.hpp"
#include "cosetlab/qes.hpp"
#include "cosetlab/random.hpp"
#include "cosetlab/report.hpp"
#include "cosetlab/states.hpp"

using namespace cosetlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0: no runtime requirement
  std::function<Outcome()> body;
};

std::string num(double v) { return format_number(v, 6); }

std::vector<GroupPtr> lattice_groups() {
  return {make_group(GroupRecipe::symmetric(3)), make_group(GroupRecipe::symmetric(4)),
          make_group(GroupRecipe::dihedral(4)), make_group(GroupRecipe::dihedral(6)),
          make_group(GroupRecipe::cyclic(12))};
}

CandidateFamily sdp(int n) {
  return candidate_family(make_group(GroupRecipe::semidirect({n}, 2, -1)), FamilySpec::parse("kind=sdp"));
}
CandidateFamily sym4() {
  return candidate_family(make_group(GroupRecipe::symmetric(4)), FamilySpec::parse("kind=sym_involution"));
}

Outcome rank_identity() {
  std::size_t cases = 0, bad = 0;
  for (const auto& g : lattice_groups()) {
    for (const auto& h : all_subgroups(g)) {
      ++cases;
      if (numeric_rank(coset_state(g, h).op(), 1e-9) != g->order() / h.order()) ++bad;
    }
  }
  return {bad == 0, std::to_string(cases - bad) + "/" + std::to_string(cases) + " subgroups with rank |G|/|H|"};
}

Outcome norm_and_overlap_laws() {
  const double tol = 1e-8;
  std::size_t pairs = 0, norm_bad = 0, overlap_bad = 0, literal_bad = 0, literal_bad_equal_order = 0,
              transposed_bad = 0;
  double worst_literal = 0.0;
  for (const auto& g : lattice_groups()) {
    const auto subs = all_subgroups(g);
    const double n = static_cast<double>(g->order());
    std::vector<DensityOperator> rho;
    std::vector<Matrix> proj;
    for (const auto& h : subs) {
      rho.push_back(coset_state(g, h));
      proj.push_back(support_projector(rho.back().op()).op().matrix());
      if (std::abs(operator_norm(rho.back().op()) - static_cast<double>(h.order()) / n) > tol) ++norm_bad;
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
      for (std::size_t j = 0; j < subs.size(); ++j) {
        ++pairs;
        const double gamma = static_cast<double>(intersection_size(subs[i], subs[j]));
        if (std::abs(overlap(rho[i], rho[j]) - gamma / n) > tol) ++overlap_bad;
        // tr(P_H rho_H') against gamma / |H'|, exactly as the criterion states it
        const double literal = trace_product(proj[i], rho[j].matrix()).real();
        const double dev = std::abs(literal - gamma / static_cast<double>(subs[j].order()));
        worst_literal = std::max(worst_literal, dev);
        if (dev > tol) {
          ++literal_bad;
          if (subs[i].order() == subs[j].order()) ++literal_bad_equal_order;
        }
        // tr(P_H' rho_H) = gamma / |H'|, the orientation the PGM error bound uses
        const double transposed = trace_product(proj[j], rho[i].matrix()).real();
        if (std::abs(transposed - gamma / static_cast<double>(subs[j].order())) > tol) ++transposed_bad;
      }
    }
  }
  std::ostringstream d;
  d << "operator norm " << (norm_bad ? "FAIL" : "ok") << ", tr(rho_H rho_H') " << (overlap_bad ? "FAIL" : "ok") << " on "
    << pairs << " pairs; tr(P_H rho_H') = gamma/|H'| as stated fails on " << literal_bad << "/" << pairs
    << " pairs (worst " << num(worst_literal) << ", " << literal_bad_equal_order
    << " of them with |H| = |H'|); since P_H = (|G|/|H|) rho_H the identity is gamma/|H|, and "
    << "tr(P_H' rho_H) = gamma/|H'| holds on " << (pairs - transposed_bad) << "/" << pairs << " pairs";
  return {norm_bad == 0 && overlap_bad == 0 && literal_bad == 0 && transposed_bad == 0, d.str()};
}

Outcome operator_inequality() {
  const auto s = hn_random_trials(200, 2, 16, 20240601, 1e-9);
  return {s.passed == 200 && s.min_witness >= -1e-9,
          std::to_string(s.passed) + "/200 PSD, min eigenvalue " + num(s.min_witness)};
}

// Dense PGM statistics for criteria 4 and 5, computed once.
struct PgmRun {
  std::string name;
  int k;
  PgmStatistics stats;
  PgmErrorCaps caps;
  double csi_cap;
};

std::vector<PgmRun>& pgm_runs() {
  static std::vector<PgmRun> runs = [] {
    std::vector<PgmRun> out;
    const std::vector<std::pair<std::string, CandidateFamily>> fams{
        {"sdp(Z_5 x| Z_2)", sdp(5)}, {"sdp(Z_7 x| Z_2)", sdp(7)}, {"sym(S_4)", sym4()}};
    for (const auto& [name, fam] : fams) {
      for (int k = 1; std::pow(static_cast<double>(fam.group()->order()), k) <= 4096; ++k)
        out.push_back({name, k, pgm_statistics(fam, k, PgmWeighting::projective, ComputePath::dense),
                       pgm_error_cap(fam, k), csi_success_cap(fam, k)});
    }
    return out;
  }();
  return runs;
}

Outcome pgm_error_cap_check() {
  std::size_t checks = 0, bad = 0, monotone_bad = 0;
  double min_slack = 1e300;
  std::ostringstream d;
  const PgmRun* prev = nullptr;
  for (const auto& r : pgm_runs()) {
    for (std::size_t i = 0; i < r.stats.member_success.size(); ++i) {
      ++checks;
      const double err = 1.0 - r.stats.member_success[i];
      min_slack = std::min(min_slack, r.caps.per_member[i] - err);
      if (err > r.caps.per_member[i] + 1e-8) ++bad;
    }
    if (prev && prev->name == r.name && r.stats.average_success < prev->stats.average_success) ++monotone_bad;
    prev = &r;
    d << r.name << " k=" << r.k << " success " << num(r.stats.average_success) << "; ";
  }
  d << checks << " member checks, " << bad << " above cap (min cap - error " << num(min_slack) << "), " << monotone_bad
    << " decreases";
  return {bad == 0 && monotone_bad == 0, d.str()};
}

Outcome csi_cap_check() {
  std::size_t applicable = 0, bad = 0;
  std::ostringstream d;
  for (const auto& r : pgm_runs()) {
    if (r.csi_cap >= 1.0) continue;
    ++applicable;
    if (r.stats.average_success > r.csi_cap + 1e-8) ++bad;
    d << r.name << " k=" << r.k << " " << num(r.stats.average_success) << " <= " << num(r.csi_cap) << "; ";
  }
  d << applicable << " instances with cap < 1, " << bad << " violations";
  return {applicable > 0 && bad == 0, d.str()};
}

Outcome tcs_both_sides() {
  std::size_t bad = 0;
  std::ostringstream d;
  const std::vector<std::pair<std::string, CandidateFamily>> fams{{"sym(S_4)", sym4()}, {"sdp(Z_5 x| Z_2)", sdp(5)}};
  for (const auto& [name, fam] : fams) {
    for (int k = 1; k <= 3; ++k) {
      const auto t = tcs_statistics(fam, k);
      for (double a : t.member_acceptance)
        if (std::abs(a - 1.0) > 1e-8) ++bad;
      const double fp_cap = tcs_error_cap(fam, k);
      if (t.false_positive > fp_cap + 1e-9) ++bad;
      const double cap = 0.25 * std::sqrt(std::pow(static_cast<double>(fam.max_order()), k) / static_cast<double>(fam.size()));
      const auto adv = measured_tcs_advantage(fam, k);
      if (adv.advantage > cap + 1e-8) ++bad;
      d << name << " k=" << k << " [" << to_string(t.path) << "] fp " << num(t.false_positive) << "<=" << num(fp_cap)
        << " adv " << num(adv.advantage) << "<=" << num(cap) << "; ";
    }
  }
  d << bad << " violations";
  return {bad == 0, d.str()};
}

Outcome helstrom_identity() {
  Rng rng(77);
  std::size_t instances = 0, bad = 0, beaten = 0;
  double worst = 0.0;
  auto check = [&](const HermitianOperator& a, const HermitianOperator& b) {
    ++instances;
    const auto h = helstrom(a, b);
    const double expected = 0.5 + 0.25 * trace_norm(a - b);
    const double dev = std::abs(h.measured - expected);
    worst = std::max(worst, dev);
    if (dev > 1e-8 || h.povm.completeness_defect() > 1e-8) ++bad;
    const auto dim = static_cast<Eigen::Index>(a.dim());
    for (int r = 0; r < 20; ++r) {
      const Matrix u = random_unitary(a.dim(), rng);
      std::vector<double> diag(a.dim());
      for (auto& v : diag) v = unit_uniform(rng);
      const Matrix e = u * HermitianOperator::diagonal(diag).matrix() * u.adjoint();
      const double p = 0.5 * (trace_product(e, a.matrix()).real() +
                              trace_product(Matrix::Identity(dim, dim) - e, b.matrix()).real());
      if (p > h.success + 1e-8) ++beaten;
    }
  };
  std::uniform_int_distribution<std::size_t> dims(2, 16);
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = dims(rng);
    std::uniform_int_distribution<std::size_t> ranks(1, d);
    const auto a = random_density(d, ranks(rng), rng);
    const auto b = random_density(d, ranks(rng), rng);
    check(a, b);
  }
  for (const auto& g : lattice_groups()) {
    const auto mixed = maximally_mixed(g);
    for (const auto& h : all_subgroups(g)) check(coset_state(g, h).op(), mixed.op());
  }
  return {bad == 0 && beaten == 0, std::to_string(instances) + " instances, worst deviation " + num(worst) + ", " +
                                       std::to_string(beaten) + " random POVMs above the optimum"};
}

Outcome qes_instance() {
  const QesScheme scheme(QesParams{4, 2});
  std::size_t bad = 0;
  double worst_decrypt = 0.0, worst_orth = 0.0;
  for (const auto& h : scheme.keys()) {
    const POVM p = scheme.decryption_povm(h);
    worst_orth = std::max(worst_orth, (p.element("0").matrix() * p.element("1").matrix()).cwiseAbs().maxCoeff());
    for (int s = 0; s < 2; ++s) {
      const auto d = scheme.decrypt(h, scheme.encrypt(h, s));
      worst_decrypt = std::max(worst_decrypt, std::abs(1.0 - d.distribution.probability(std::to_string(s))));
      if (d.message != s) ++bad;
    }
  }
  if (worst_decrypt > 1e-9 || worst_orth > 1e-12) ++bad;

  std::ostringstream d;
  d << "decryption worst " << num(worst_decrypt) << ", sector overlap " << num(worst_orth) << "; ";
  for (int k = 0; k <= 1; ++k) {
    SecurityOptions opt;
    if (k == 0) {
      opt.path = ComputePath::dense;  // cross-checked on the factored path
    } else {
      opt.path = ComputePath::block;
      opt.cross_check = false;
    }
    const auto r = indistinguishability_norms(scheme, k, opt);
    if (r.symmetry_defect > 1e-6) ++bad;
    if (r.bound.bound <= 2.0)
      for (double l : r.l)
        if (l > r.bound.bound) ++bad;
    d << "k=" << k << " l=(" << num(r.l[0]) << "," << num(r.l[1]) << ") [" << r.l_path << "] bound " << num(r.bound.bound);
    if (k == 0) {
      if (!r.l0_cross_check || r.cross_check_path != "gram" || std::abs(*r.l0_cross_check - r.l0()) > 1e-8) ++bad;
      if (r.l0_cross_check) d << ", " << r.cross_check_path << " " << num(*r.l0_cross_check);
    }
    d << "; ";
  }
  const bool counts = key_count(4, 2) == 3 && key_set(4, 2).size() == 3 && key_count(6, 2) == 15 && key_set(6, 2).size() == 15;
  if (!counts) ++bad;
  d << "|K_4^2|=" << key_set(4, 2).size() << " |K_6^2|=" << key_set(6, 2).size();
  return {bad == 0, d.str()};
}

struct Captured {
  int code = -1;
  std::string out;
};

Captured run_cli(const std::string& cli, const std::string& args) {
  Captured c;
  FILE* pipe = popen(("'" + cli + "' " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return c;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) c.out.append(buf, n);
  const int status = pclose(pipe);
  c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

Outcome reproducibility(const std::string& cli) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / ("cosetlab_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> commands{
      "verify --group 'kind=dihedral n=6' --family kind=sdp",
      "verify --group 'kind=symmetric n=4' --family kind=sym_involution --format json",
      "csi-sweep --group 'kind=semidirect A=Z_7 B=Z_2 action=inversion' --family kind=sdp --k-min 1 --k-max 4",
      "csi-sweep --group 'kind=dihedral n=5' --family kind=sdp --k-max 4 --workers 2 --format json",
      "tcs-sweep --group 'kind=symmetric n=4' --family kind=sym_involution --k-max 3",
      "qes-security --n 4 --m 2 --k 0 --seed 3",
      "qes-security --n 4 --m 2 --k 0 --seed 3 --format json",
      "hn-check --trials 200 --seed 42"};
  std::size_t identical = 0;
  std::ostringstream d;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto a = run_cli(cli, commands[i]);
    const auto b = run_cli(cli, commands[i]);
    const std::string file = (dir / ("out" + std::to_string(i))).string();
    run_cli(cli, commands[i] + " --out '" + file + "'");
    std::ifstream f(file, std::ios::binary);
    const std::string written((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (a.code == b.code && !a.out.empty() && a.out == b.out && written == a.out) {
      ++identical;
    } else {
      d << "differs: " << commands[i] << " (exit " << a.code << "/" << b.code << "); ";
    }
  }
  fs::remove_all(dir);
  d << identical << "/" << commands.size() << " commands byte-identical on repeat and via --out";
  return {identical == commands.size(), d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <cosetlab cli>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::vector<Criterion> criteria{
      {1, "rank identity", 30, rank_identity},
      {2, "norm and overlap laws", 60, norm_and_overlap_laws},
      {3, "operator inequality", 10, operator_inequality},
      {4, "PGM error cap", 300, pgm_error_cap_check},
      {5, "CSI success cap", 0, csi_cap_check},
      {6, "TCS acceptance, false positives, advantage", 300, tcs_both_sides},
      {7, "Helstrom identity", 0, helstrom_identity},
      {8, "QES instance", 300, qes_instance},
      {9, "CLI reproducibility", 0, [&] { return reproducibility(cli); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the " + num(c.budget_seconds) + " s budget";
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ", "
              << format_number(secs, 3) << " s): " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
