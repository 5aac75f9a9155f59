#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cosetlab/bounds.hpp"
#include "cosetlab/qes.hpp"

namespace cosetlab {

// Locale-independent decimal text with `digits` significant digits.
std::string format_number(double v, int digits = 12);
// Shortest text that reads back to exactly v.
std::string format_exact(double v);

extern const char* const kSweepCsvHeader;

std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const CandidateFamily& family, const std::vector<SweepRow>& rows);

nlohmann::json security_json(const SecurityReport& report);

}  // namespace cosetlab
