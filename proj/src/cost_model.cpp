#include "cloudplan/cost_model.hpp"

#include "cloudplan/errors.hpp"

#include <cmath>
#include <string>

namespace cloudplan {

PriceBook PriceBook::defaults() {
    PriceBook p;
    p.p_blob = 0.023L / units::kGB;
    p.p_read = 0.004L / units::kOpsBatch;
    p.p_write = 0.05L / units::kOpsBatch;
    p.p_sec = 1.086L / units::kHour;
    p.p_byte = 6.25L / units::kTB;
    p.egress = 120.0L / units::kTB;
    p.ops_chunk_bytes = 8 * units::kMiB;
    p.storage_months = 1.0L / 30.0L;
    return p;
}

void PriceBook::validate() const {
    auto check = [](long double v, const char* name) {
        if (!std::isfinite(v) || v < 0) throw InputError(std::string("negative measurement: price field ") + name);
    };
    check(p_blob, "p_blob");
    check(p_read, "p_read");
    check(p_write, "p_write");
    check(p_sec, "p_sec");
    check(p_byte, "p_byte");
    check(egress, "egress");
    check(storage_months, "storage_months");
    if (!std::isfinite(ops_chunk_bytes) || ops_chunk_bytes <= 0) {
        throw InputError("ops_chunk_bytes must be positive");
    }
}

std::uint64_t blob_operation_count(long double bytes, const PriceBook& prices) {
    if (bytes <= 0) return 0;
    return static_cast<std::uint64_t>(std::ceil(bytes / prices.ops_chunk_bytes));
}

Money migration_cost(long double bytes, const PriceBook& prices) {
    if (bytes <= 0) return kZeroMoney;
    const auto ops = static_cast<long double>(blob_operation_count(bytes, prices));
    const long double dollars = prices.egress * bytes + (prices.p_read + prices.p_write) * ops +
                                prices.p_blob * prices.storage_months * bytes;
    return Money::from_dollars(dollars);
}

long double break_even_scan_bytes(long double runtime_s, const PriceBook& prices) {
    if (prices.p_byte == 0) throw InputError("per-byte price is zero; boundary undefined");
    return prices.p_sec / prices.p_byte * runtime_s;
}

Money per_byte_query_cost(long double bytes_scanned, const PriceBook& prices) {
    return Money::from_dollars(prices.p_byte * bytes_scanned);
}

Money per_compute_query_cost(long double runtime_s, const PriceBook& prices) {
    return Money::from_dollars(prices.p_sec * runtime_s);
}

long double transfer_seconds(long double bytes, long double bytes_per_second) {
    if (bytes <= 0) return 0;
    return bytes / bytes_per_second;
}

}  // namespace cloudplan
