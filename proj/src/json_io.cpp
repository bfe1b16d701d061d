#include "cloudplan/json_io.hpp"

#include "cloudplan/errors.hpp"

#include <charconv>
#include <cmath>

namespace cloudplan::json_io {

json parse(std::string_view text, std::string_view what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InputError(std::string(what) + ": malformed JSON: " + e.what());
    }
}

const json& require(const json& obj, const char* key, std::string_view what) {
    if (!obj.is_object()) throw InputError(std::string(what) + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(std::string(what) + ": missing field '" + key + "'");
    return *it;
}

Money money_field(const json& obj, const char* key, std::string_view what) {
    const json& v = require(obj, key, what);
    Money m;
    if (v.is_string()) {
        m = Money::parse(v.get<std::string>());
    } else if (v.is_number()) {
        m = Money::from_dollars(v.get<double>());
    } else {
        throw InputError(std::string(what) + ": field '" + key + "' must be a decimal string");
    }
    if (m < kZeroMoney) throw InputError(std::string("negative measurement: ") + std::string(what) + "." + key);
    return m;
}

double nonneg_number(const json& obj, const char* key, std::string_view what) {
    const json& v = require(obj, key, what);
    if (!v.is_number()) throw InputError(std::string(what) + ": field '" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d) || d < 0) {
        throw InputError(std::string("negative measurement: ") + std::string(what) + "." + key);
    }
    return d;
}

namespace {

long double optional_number(const json& obj, const char* key, long double fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    if (!it->is_number()) throw InputError(std::string("prices: field '") + key + "' must be a number");
    return it->get<double>();
}

}  // namespace

PriceBook load_prices(std::string_view document) {
    const json doc = parse(document, "prices");
    if (!doc.is_object()) throw InputError("prices: expected an object");
    const PriceBook defaults = PriceBook::defaults();
    PriceBook p;
    // Sign checks happen in validate().
    auto num = [&](const char* key) -> long double {
        const json& v = require(doc, key, "prices");
        if (!v.is_number()) throw InputError(std::string("prices: field '") + key + "' must be a number");
        return v.get<double>();
    };
    p.p_blob = num("p_blob_per_gb_month") / units::kGB;
    p.p_read = num("p_read_per_10k") / units::kOpsBatch;
    p.p_write = num("p_write_per_10k") / units::kOpsBatch;
    p.p_sec = num("p_sec_per_hour") / units::kHour;
    p.p_byte = num("p_byte_per_tb") / units::kTB;
    p.egress = num("egress_per_tb") / units::kTB;
    p.ops_chunk_bytes = optional_number(doc, "ops_chunk_mib", defaults.ops_chunk_bytes / units::kMiB) * units::kMiB;
    p.storage_months = optional_number(doc, "storage_months", defaults.storage_months);
    p.validate();
    return p;
}

json prices_to_json(const PriceBook& p) {
    auto d = [](long double v) { return static_cast<double>(v); };
    json out = json::object();
    out["p_blob_per_gb_month"] = d(p.p_blob * units::kGB);
    out["p_read_per_10k"] = d(p.p_read * units::kOpsBatch);
    out["p_write_per_10k"] = d(p.p_write * units::kOpsBatch);
    out["p_sec_per_hour"] = d(p.p_sec * units::kHour);
    out["p_byte_per_tb"] = d(p.p_byte * units::kTB);
    out["egress_per_tb"] = d(p.egress * units::kTB);
    out["ops_chunk_mib"] = d(p.ops_chunk_bytes / units::kMiB);
    out["storage_months"] = d(p.storage_months);
    return out;
}

std::string format_number(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

}  // namespace cloudplan::json_io
