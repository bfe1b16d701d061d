#pragma once

// JSON conversions shared by the loaders, the CLI and the Python bindings.

#include "cloudplan/cost_model.hpp"
#include "cloudplan/money.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace cloudplan::json_io {

using nlohmann::json;

/// Parses text, turning syntax errors into InputError.
json parse(std::string_view text, std::string_view what);

const json& require(const json& obj, const char* key, std::string_view what);

/// Accepts "12.5" style strings (preferred) as well as plain JSON numbers.
Money money_field(const json& obj, const char* key, std::string_view what);
/// Non-negative number; raises "negative measurement" otherwise.
double nonneg_number(const json& obj, const char* key, std::string_view what);

/// Prices use human units on disk: $/GB-month, $/10k ops, $/hour, $/TB, MiB.
PriceBook load_prices(std::string_view document);
json prices_to_json(const PriceBook& prices);

/// Round-trip-safe rendering of a double (shortest form that parses back).
std::string format_number(double value);

}  // namespace cloudplan::json_io
