#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "seclend/calibration.hpp"
#include "seclend/haircut.hpp"
#include "seclend/indemnity.hpp"
#include "seclend/loss.hpp"
#include "seclend/types.hpp"

namespace seclend {

// nlohmann ADL hooks. All levels serialize as decimal fractions; basis points
// are a display concern handled by the human summaries below.
void to_json(nlohmann::json& j, const DejdParams& p);
void from_json(const nlohmann::json& j, DejdParams& p);
void to_json(nlohmann::json& j, const CreditParams& p);
void from_json(const nlohmann::json& j, CreditParams& p);
void to_json(nlohmann::json& j, const TransactionSpec& t);
void from_json(const nlohmann::json& j, TransactionSpec& t);
void to_json(nlohmann::json& j, const RatingTarget& t);
void from_json(const nlohmann::json& j, RatingTarget& t);
void to_json(nlohmann::json& j, const RiskMetrics& m);
void to_json(nlohmann::json& j, const IndemnitySheet& s);
void from_json(const nlohmann::json& j, IndemnitySheet& s);
void to_json(nlohmann::json& j, const SeedDescriptor& s);
void to_json(nlohmann::json& j, const HaircutResult& r);
void to_json(nlohmann::json& j, const FitReport& r);

/// Table 2 layout: rows are borrower grades, columns are target ratings,
/// cells are haircut fractions.
void write_schedule_csv(const HaircutSchedule& schedule, std::ostream& os);

/// Table 3 row layout (item,value), values as decimal fractions.
void write_sheet_csv(const IndemnitySheet& sheet, std::ostream& os);

/// Table 4 layout: one row per (criterion, borrower), one column per
/// (mpr, haircut) pair, cells are total charges as decimal fractions.
/// Failed cells carry the error text.
void write_scenario_csv(const ScenarioGrid& grid, std::ostream& os);

/// Human-readable pricing summary in percent / basis points.
std::string sheet_summary(const IndemnitySheet& sheet);

std::string scenario_summary(const ScenarioGrid& grid);

} // namespace seclend
