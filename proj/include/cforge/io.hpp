#pragma once

#include <string>

#include <json.hpp>

#include "cforge/model.hpp"
#include "cforge/oracle.hpp"

namespace cforge::io {

using json = nlohmann::json;

/// Reads a whole JSON document from a path ("-" is stdin). ParseError on
/// unreadable files or malformed JSON.
json read_json(const std::string& path);
json parse_json(const std::string& text);

json to_json(const Setting& setting);
json to_json(const ProductSetting& setting);
json to_json(const ExplicitSetting& setting);
/// Rejects c_1 != 0 unless allow_no_free_action. Shape errors raise
/// ParseError; model invariant violations raise ArgumentError.
Setting setting_from_json(const json& doc, bool allow_no_free_action = false);

json outcome_to_json(Outcome s);
Outcome outcome_from_json(const json& doc);

json to_json(const Contract& contract);
Contract contract_from_json(const json& doc);

json to_json(const SeparationInstance& inst);
SeparationInstance separation_from_json(const json& doc);

/// Finite doubles as numbers, infinities as the strings "inf"/"-inf".
json number(double x);

}  // namespace cforge::io
