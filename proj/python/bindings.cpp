#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cosetlab/bounds.hpp"
#include "cosetlab/cli.hpp"
#include "cosetlab/errors.hpp"
#include "cosetlab/group.hpp"
#include "cosetlab/linop.hpp"
#include "cosetlab/measurements.hpp"
#include "cosetlab/qes.hpp"
#include "cosetlab/states.hpp"

namespace py = pybind11;
using namespace cosetlab;

namespace {

Subgroup subgroup_from_names(const GroupPtr& g, const std::vector<std::string>& gens) {
  std::vector<Element> e;
  for (const auto& s : gens) e.push_back(g->parse_element(s));
  return subgroup_closure(g, e);
}

py::dict sweep_row_dict(const SweepRow& r) {
  py::dict d;
  d["k"] = r.k;
  d["csi_success_cap"] = r.csi_success_cap;
  d["pgm_error_bound"] = r.pgm_error_bound;
  d["tcs_tracenorm_bound"] = r.tcs_tracenorm_bound;
  d["tcs_error_bound"] = r.tcs_error_bound;
  d["measured_pgm_success"] = r.measured_pgm_success;
  d["measured_tcs_advantage"] = r.measured_tcs_advantage;
  d["measured_tcs_error"] = r.measured_tcs_error;
  d["flags"] = r.flags;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cosetlab, m) {
  m.doc() = "Coset states, their measurements and sample-complexity bounds.";

  static py::exception<CapacityError> capacity_error(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const CapacityError& e) {
      py::set_error(capacity_error, e.what());
    }
  });

  py::class_<FiniteGroup, std::shared_ptr<FiniteGroup>>(m, "Group")
      .def_property_readonly("order", &FiniteGroup::order)
      .def_property_readonly("recipe", [](const FiniteGroup& g) { return g.recipe().to_string(); })
      .def("mul", &FiniteGroup::mul)
      .def("inverse", &FiniteGroup::inverse)
      .def("element_name", &FiniteGroup::element_name)
      .def("parse_element", &FiniteGroup::parse_element)
      .def("is_abelian", &FiniteGroup::is_abelian);

  m.def("make_group", [](const std::string& recipe) {
    return std::const_pointer_cast<FiniteGroup>(make_group(GroupRecipe::parse(recipe)));
  }, py::arg("recipe"), "Build a group from a recipe such as \"kind=dihedral n=6\".");

  py::class_<Subgroup>(m, "Subgroup")
      .def_property_readonly("order", &Subgroup::order)
      .def_property_readonly("members", &Subgroup::members)
      .def_property_readonly("name", &Subgroup::name);

  m.def("subgroup", [](const std::shared_ptr<FiniteGroup>& g, const std::vector<std::string>& gens) {
    return subgroup_from_names(g, gens);
  }, py::arg("group"), py::arg("generators"));
  m.def("all_subgroups", [](const std::shared_ptr<FiniteGroup>& g) { return all_subgroups(g); });
  m.def("left_cosets", [](const std::shared_ptr<FiniteGroup>& g, const Subgroup& h) { return left_cosets(*g, h); });
  m.def("intersection_size", &intersection_size);

  py::class_<CandidateFamily>(m, "Family")
      .def_property_readonly("size", &CandidateFamily::size)
      .def("describe", &CandidateFamily::describe)
      .def("subgroups", &CandidateFamily::subgroups)
      .def("gamma", [](const CandidateFamily& f) {
        std::vector<std::vector<std::size_t>> out(f.size(), std::vector<std::size_t>(f.size()));
        for (std::size_t i = 0; i < f.size(); ++i)
          for (std::size_t j = 0; j < f.size(); ++j) out[i][j] = f.gamma(i, j);
        return out;
      });
  m.def("candidate_family", [](const std::shared_ptr<FiniteGroup>& g, const std::string& spec) {
    return candidate_family(g, FamilySpec::parse(spec));
  }, py::arg("group"), py::arg("spec"));

  m.def("coset_state", [](const std::shared_ptr<FiniteGroup>& g, const Subgroup& h) {
    return coset_state(g, h).matrix();
  });
  m.def("phase_coset_state", [](int n, int m_, const std::string& key, int s) {
    const GroupPtr g = make_group(GroupRecipe::symmetric(n));
    return phase_coset_state(g, m_, parse_cycles(key, n), s).matrix();
  }, py::arg("n"), py::arg("m"), py::arg("key"), py::arg("s"));

  m.def("trace_norm", [](const Matrix& a) { return trace_norm(HermitianOperator(a)); });
  m.def("operator_norm", [](const Matrix& a) { return operator_norm(HermitianOperator(a)); });
  m.def("numeric_rank", [](const Matrix& a, double tol) { return numeric_rank(HermitianOperator(a), tol); },
        py::arg("a"), py::arg("tol") = 1e-9);
  m.def("helstrom", [](const Matrix& a, const Matrix& b) {
    const HelstromResult r = helstrom(HermitianOperator(a), HermitianOperator(b));
    return py::make_tuple(r.success, r.measured);
  }, "Returns (optimal success, success of the constructed measurement).");

  m.def("csi_success_cap", &csi_success_cap);
  m.def("pgm_error_cap", [](const CandidateFamily& f, int k) {
    const auto c = pgm_error_cap(f, k);
    return py::make_tuple(c.per_member, c.uniform);
  });
  m.def("tcs_tracenorm_cap", &tcs_tracenorm_cap);
  m.def("tcs_error_cap", &tcs_error_cap);

  m.def("pgm_statistics", [](const CandidateFamily& f, int k, const std::string& weighting, const std::string& path) {
    const auto w = weighting == "states" ? PgmWeighting::states : PgmWeighting::projective;
    const PgmStatistics s = pgm_statistics(f, k, w, parse_compute_path(path));
    py::dict d;
    d["member_success"] = s.member_success;
    d["average_success"] = s.average_success;
    d["path"] = to_string(s.path);
    return d;
  }, py::arg("family"), py::arg("k"), py::arg("weighting") = "projective", py::arg("path") = "automatic");
  m.def("tcs_statistics", [](const CandidateFamily& f, int k, const std::string& path) {
    const TcsStatistics s = tcs_statistics(f, k, parse_compute_path(path));
    py::dict d;
    d["rank"] = s.rank;
    d["member_acceptance"] = s.member_acceptance;
    d["false_positive"] = s.false_positive;
    d["path"] = to_string(s.path);
    return d;
  }, py::arg("family"), py::arg("k"), py::arg("path") = "automatic");
  m.def("measured_tcs_advantage", [](const CandidateFamily& f, int k, const std::string& path) {
    return measured_tcs_advantage(f, k, parse_compute_path(path)).advantage;
  }, py::arg("family"), py::arg("k"), py::arg("path") = "automatic");
  m.def("sweep", [](const CandidateFamily& f, int k_min, int k_max) {
    py::list rows;
    for (const auto& r : sweep(f, k_min, k_max)) rows.append(sweep_row_dict(r));
    return rows;
  });

  m.def("hn_random_trials", [](std::size_t trials, std::size_t dim_min, std::size_t dim_max, std::uint64_t seed) {
    const HnTrialSummary s = hn_random_trials(trials, dim_min, dim_max, seed);
    return py::make_tuple(s.passed, s.trials, s.min_witness);
  }, py::arg("trials"), py::arg("dim_min"), py::arg("dim_max"), py::arg("seed"));

  m.def("key_set", [](int n, int m_) {
    std::vector<std::string> out;
    for (const auto& p : key_set(n, m_)) out.push_back(to_cycle_string(p));
    return out;
  });
  m.def("key_count", &key_count);
  m.def("qes_bound", [](int n, int m_, int k) {
    const QesBound b = qes_bound(QesParams{n, m_}, k);
    py::dict d;
    d["bound"] = b.bound;
    d["key_count"] = b.key_count;
    d["stirling_estimate"] = b.stirling_keys;
    d["vacuous"] = b.vacuous;
    return d;
  });
  m.def("indistinguishability_norms", [](int n, int m_, int k) {
    const QesScheme scheme(QesParams{n, m_});
    const SecurityReport r = indistinguishability_norms(scheme, k);
    py::dict d;
    d["l"] = r.l;
    d["pairwise"] = r.pairwise;
    d["bound"] = r.bound.bound;
    d["symmetry_defect"] = r.symmetry_defect;
    d["flags"] = r.flags;
    return d;
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, log;
    std::vector<std::string> full{"cosetlab"};
    full.insert(full.end(), args.begin(), args.end());
    const int code = run(full, out, log);
    return py::make_tuple(code, out.str(), log.str());
  }, "Run a command-line invocation in-process; returns (exit code, output, log).");
}
