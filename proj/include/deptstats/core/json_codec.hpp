#pragma once

#include <json.hpp>

#include "deptstats/core/model.hpp"

// nlohmann::json conversions for the domain types. Field names are the ones
// used in fixture record files and snapshot collections. An AuthorId is
// serialized as its "provider:value" string.
namespace deptstats {

void to_json(nlohmann::json &j, const AuthorId &id);
void from_json(const nlohmann::json &j, AuthorId &id);

void to_json(nlohmann::json &j, const YearWindow &window);
YearWindow window_from_json(const nlohmann::json &j);

void to_json(nlohmann::json &j, const Institution &institution);
void from_json(const nlohmann::json &j, Institution &institution);

void to_json(nlohmann::json &j, const Department &department);
void from_json(const nlohmann::json &j, Department &department);

void to_json(nlohmann::json &j, const FacultyMember &member);
void from_json(const nlohmann::json &j, FacultyMember &member);

void to_json(nlohmann::json &j, const Publication &publication);
void from_json(const nlohmann::json &j, Publication &publication);

void to_json(nlohmann::json &j, const DepartmentMetrics &metrics);
void from_json(const nlohmann::json &j, DepartmentMetrics &metrics);

// {"value": "6.67", "numerator": 20, "denominator": 3}
nlohmann::json ratio_json(const Ratio &value);

} // namespace deptstats
