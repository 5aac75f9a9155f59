#include "cosetlab/report.hpp"

#include <charconv>
#include <cmath>

namespace cosetlab {

std::string format_number(double v, int digits) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

std::string format_exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const char* const kSweepCsvHeader =
    "k,csi_success_cap,pgm_error_bound,tcs_tracenorm_bound,tcs_error_bound,measured_pgm_success,"
    "measured_tcs_advantage,measured_tcs_error,flags";

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepCsvHeader) + '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.k) + ',' + format_number(r.csi_success_cap) + ',' + format_number(r.pgm_error_bound) + ',' +
           cell(r.tcs_tracenorm_bound) + ',' + format_number(r.tcs_error_bound) + ',' + cell(r.measured_pgm_success) +
           ',' + cell(r.measured_tcs_advantage) + ',' + cell(r.measured_tcs_error) + ',' + join(r.flags, ';') + '\n';
  }
  return out;
}

nlohmann::json sweep_json(const CandidateFamily& family, const std::vector<SweepRow>& rows) {
  nlohmann::json j;
  j["group"] = family.group()->recipe().to_string();
  j["family"] = family.describe();
  j["family_size"] = family.size();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["k"] = r.k;
    row["csi_success_cap"] = r.csi_success_cap;
    row["pgm_error_bound"] = r.pgm_error_bound;
    row["pgm_error_uniform_bound"] = r.pgm_error_uniform;
    row["tcs_tracenorm_bound"] = opt(r.tcs_tracenorm_bound);
    row["tcs_error_bound"] = r.tcs_error_bound;
    row["measured_pgm_success"] = opt(r.measured_pgm_success);
    row["measured_pgm_worst_error"] = opt(r.measured_pgm_worst_error);
    row["measured_tcs_advantage"] = opt(r.measured_tcs_advantage);
    row["measured_tcs_error"] = opt(r.measured_tcs_error);
    row["worst_member_tcs_advantage"] = opt(r.worst_member_tcs_advantage);
    row["member_pgm_error"] = r.member_pgm_error;
    row["member_pgm_error_bound"] = r.member_pgm_cap;
    row["pgm_path"] = r.pgm_path;
    row["tcs_path"] = r.tcs_path;
    row["flags"] = r.flags;
    arr.push_back(std::move(row));
  }
  j["rows"] = std::move(arr);
  return j;
}

nlohmann::json security_json(const SecurityReport& r) {
  nlohmann::json j;
  j["n"] = r.params.n;
  j["m"] = r.params.m;
  j["k"] = r.k;
  j["l"] = r.l;
  j["l0"] = r.l0();
  j["pairwise_norm"] = r.pairwise;
  j["bound"] = r.bound.bound;
  j["bound_vacuous"] = r.bound.vacuous;
  j["key_count"] = r.bound.key_count;
  j["stirling_estimate"] = r.bound.stirling_keys;
  j["symmetry_defect"] = r.symmetry_defect;
  j["l0_cross_check"] = opt(r.l0_cross_check);
  j["cross_check_path"] = r.cross_check_path;
  j["l_path"] = r.l_path;
  j["pairwise_path"] = r.pairwise_path;
  j["pure_components"] = r.components;
  j["flags"] = r.flags;
  return j;
}

}  // namespace cosetlab
