#pragma once

#include "polybloch/bloch.hpp"
#include "polybloch/essential.hpp"
#include "polybloch/symbols.hpp"
#include "polybloch/verify.hpp"

#include <json.hpp>

#include <span>
#include <string>

namespace polybloch {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

// Deterministic text form: keys in insertion order, two-space indent,
// floating-point numbers with 17 significant digits, non-finite numbers as
// null.
std::string dump_json(const Json& value);

Json point_json(std::span<const Complex> z);

Json to_json(const DeltaRow& row);
Json to_json(const BoundReport& report);
Json to_json(const BlochNormEstimate& estimate);
Json to_json(const InequalityReport& report);
Json to_json(const ValidationReport& report);

// One line per delta: delta,S,K,samples_in_region,b_1..b_n
std::string rows_csv(const BoundReport& report);

} // namespace polybloch
