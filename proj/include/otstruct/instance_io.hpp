#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "otstruct/measures.hpp"

namespace otstruct {

/// Instance documents look like
///
///   {"mu":   {"points": [["0", "1/2"], ...], "masses": ["1/4", ...]},
///    "nu":   {...},
///    "cost": {"type": "euclidean", "p": "2"}}
///
/// or carry {"type": "matrix", "values": [[...], ...]} as the cost, in which
/// case points are optional. Rationals may be strings ("3/4", "0.125", "2")
/// or JSON numbers. Atoms of mass zero are removed (together with their cost
/// matrix row or column) and reported through `warnings`.
Instance instance_from_json(const nlohmann::json& doc, std::vector<std::string>* warnings = nullptr);

/// Throws ParseError when the file cannot be read or is not valid JSON.
Instance load_instance(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Canonical document: every rational written as its lowest-terms string.
nlohmann::json instance_to_json(const Instance& instance);
void save_instance(const Instance& instance, const std::string& path);

/// 64-bit FNV-1a of the canonical document, as 16 hex digits.
std::string instance_hash(const Instance& instance);

Rational rational_from_json(const nlohmann::json& value, const std::string& where);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace otstruct
